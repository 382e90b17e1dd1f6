#include "bregkit/entropy.hpp"

#include <cmath>
#include <sstream>

#include "bregkit/rng.hpp"

namespace bregkit {

namespace {

void validate_node(const EntropyNode& node, std::size_t dim, const NormSpec& norm);

void validate_base_params(const EntropyNode& node) {
    if (const auto* h = std::get_if<Hct>(&node)) {
        if (h->q == 0.0 || h->q == 1.0 || !std::isfinite(h->q))
            throw InvalidSpec("Hct: q must be finite and not in {0, 1}");
    } else if (const auto* ab = std::get_if<AlphaBeta>(&node)) {
        if (!(ab->alpha >= 1.0)) throw InvalidSpec("AlphaBeta: alpha must be >= 1");
        if (!(ab->beta > 0.0 && ab->beta < 1.0))
            throw InvalidSpec("AlphaBeta: beta must be in (0,1)");
    } else if (const auto* lp = std::get_if<L2Lp>(&node)) {
        if (!(lp->p > 1.0 && lp->p <= 2.0)) throw InvalidSpec("L2Lp: p must be in (1,2]");
    } else if (const auto* be = std::get_if<BetaEntropy>(&node)) {
        if (!std::isfinite(be->beta)) throw InvalidSpec("BetaEntropy: beta must be finite");
    }
}

void validate_quadratic(const QuadraticEntropy& q, std::size_t dim) {
    if (q.a.size() != dim * dim) throw InvalidSpec("Quadratic: A must be dim x dim");
    for (double v : q.a)
        if (!std::isfinite(v)) throw InvalidSpec("Quadratic: A has a non-finite entry");
    // sampled Rayleigh quotient over Euclidean-unit vectors must stay positive
    Rng rng(0x5eed0a11);
    Vector w(dim);
    for (int it = 0; it < 512; ++it) {
        double nrm = 0.0;
        for (auto& wi : w) {
            wi = rng.normal();
            nrm += wi * wi;
        }
        nrm = std::sqrt(nrm);
        double quad = 0.0;
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j)
                quad += q.a[i * dim + j] * (w[i] / nrm) * (w[j] / nrm);
        if (!(quad > 0.0)) throw InvalidSpec("Quadratic: sampled <Aw,w> not strictly positive");
    }
}

void validate_node(const EntropyNode& node, std::size_t dim, const NormSpec& norm) {
    validate_base_params(node);
    if (const auto* q = std::get_if<QuadraticEntropy>(&node)) {
        validate_quadratic(*q, dim);
    } else if (const auto* e = std::get_if<Ell2Type>(&node)) {
        if (e->pairs == 0) throw InvalidSpec("Ell2Type: pairs must be >= 1");
        if (dim != 2 * e->pairs) throw InvalidSpec("Ell2Type: dim must equal 2 * pairs");
        if (e->n_split > e->pairs) throw InvalidSpec("Ell2Type: n_split exceeds pairs");
    } else if (const auto* s = std::get_if<Scaled>(&node)) {
        if (!(s->lambda > 0.0)) throw NonpositiveLambda("Scaled: lambda must be > 0");
        if (s->inner->dim() != dim) throw DimensionMismatch("Scaled: inner dim mismatch");
    } else if (const auto* pl = std::get_if<PlusLinear>(&node)) {
        if (pl->ell.size() != dim) throw DimensionMismatch("PlusLinear: ell dim mismatch");
        if (!all_finite(pl->ell)) throw InvalidSpec("PlusLinear: ell not finite");
        if (pl->inner->dim() != dim) throw DimensionMismatch("PlusLinear: inner dim mismatch");
    } else if (const auto* so = std::get_if<SumOf>(&node)) {
        if (so->terms.empty()) throw InvalidSpec("SumOf: empty term list");
        for (const auto& [w, t] : so->terms) {
            if (!(w > 0.0)) throw InvalidSpec("SumOf: weights must be > 0");
            if (t->dim() != dim) throw DimensionMismatch("SumOf: member dim mismatch");
            if (!(t->norm() == norm)) throw InvalidSpec("SumOf: members must share the norm");
        }
    } else if (const auto* tr = std::get_if<Translated>(&node)) {
        if (tr->z0.size() != dim) throw DimensionMismatch("Translated: z0 dim mismatch");
        if (!all_finite(tr->z0)) throw InvalidSpec("Translated: z0 not finite");
        if (tr->inner->dim() != dim) throw DimensionMismatch("Translated: inner dim mismatch");
    } else if (const auto* ds = std::get_if<DirectSumOf>(&node)) {
        if (ds->blocks.empty()) throw InvalidSpec("DirectSumOf: empty block list");
        if (!(ds->c > 0.0)) throw InvalidSpec("DirectSumOf: c must be > 0");
        std::size_t total = 0;
        for (const auto& b : ds->blocks) total += b->dim();
        if (total != dim) throw DimensionMismatch("DirectSumOf: block dims do not sum to dim");
    }
}

struct DescribeVisitor {
    std::string operator()(const Bgs&) const { return "bgs"; }
    std::string operator()(const Hct& h) const { return "hct(q=" + fmt(h.q) + ")"; }
    std::string operator()(const Burg&) const { return "burg"; }
    std::string operator()(const IteratedLog&) const { return "iterlog"; }
    std::string operator()(const BetaEntropy& b) const { return "beta(" + fmt(b.beta) + ")"; }
    std::string operator()(const AlphaBeta& ab) const {
        return "alphabeta(" + fmt(ab.alpha) + "," + fmt(ab.beta) + ")";
    }
    std::string operator()(const L2Lp& l) const { return "l2lp(p=" + fmt(l.p) + ")"; }
    std::string operator()(const QuadraticEntropy&) const { return "quadratic"; }
    std::string operator()(const Ell2Type& e) const {
        return "ell2(n=" + std::to_string(e.n_split) + ",m=" + std::to_string(e.pairs) + ")";
    }
    std::string operator()(const Scaled& s) const {
        return "scaled(" + fmt(s.lambda) + "," + s.inner->describe() + ")";
    }
    std::string operator()(const PlusLinear& p) const {
        return "pluslinear(" + p.inner->describe() + ")";
    }
    std::string operator()(const SumOf& s) const {
        std::string out = "sum(";
        for (std::size_t i = 0; i < s.terms.size(); ++i) {
            if (i) out += "+";
            out += fmt(s.terms[i].first) + "*" + s.terms[i].second->describe();
        }
        return out + ")";
    }
    std::string operator()(const Translated& t) const {
        return "translated(" + t.inner->describe() + ")";
    }
    std::string operator()(const DirectSumOf& d) const {
        std::string out = "dsum(";
        for (std::size_t i = 0; i < d.blocks.size(); ++i) {
            if (i) out += ",";
            out += d.blocks[i]->describe();
        }
        return out + ")";
    }

    static std::string fmt(double v) {
        std::ostringstream os;
        os << v;
        return os.str();
    }
};

}  // namespace

EntropySpec::EntropySpec(EntropyNode node, std::size_t dim, NormSpec norm)
    : node_(std::move(node)), dim_(dim), norm_(std::move(norm)) {
    if (dim_ == 0) throw InvalidSpec("EntropySpec: dim must be >= 1");
    if (norm_.dim() != dim_) throw DimensionMismatch("EntropySpec: norm dim mismatch");
    validate_node(node_, dim_, norm_);
}

std::string EntropySpec::describe() const { return std::visit(DescribeVisitor{}, node_); }

EntropyPtr make_bgs(std::size_t dim, NormSpec norm) {
    return std::make_shared<EntropySpec>(Bgs{}, dim, std::move(norm));
}

EntropyPtr make_hct(double q, std::size_t dim, NormSpec norm) {
    return std::make_shared<EntropySpec>(Hct{q}, dim, std::move(norm));
}

EntropyPtr make_burg(std::size_t dim, NormSpec norm) {
    return std::make_shared<EntropySpec>(Burg{}, dim, std::move(norm));
}

EntropyPtr make_iterated_log(std::size_t dim, NormSpec norm) {
    return std::make_shared<EntropySpec>(IteratedLog{}, dim, std::move(norm));
}

EntropyPtr make_beta(double beta, std::size_t dim, NormSpec norm) {
    return std::make_shared<EntropySpec>(BetaEntropy{beta}, dim, std::move(norm));
}

EntropyPtr make_alpha_beta(double alpha, double beta, std::size_t dim, NormSpec norm) {
    return std::make_shared<EntropySpec>(AlphaBeta{alpha, beta}, dim, std::move(norm));
}

EntropyPtr make_l2lp(double p, std::size_t dim, NormSpec norm) {
    return std::make_shared<EntropySpec>(L2Lp{p}, dim, std::move(norm));
}

EntropyPtr make_quadratic(std::vector<double> a, std::size_t dim, NormSpec norm) {
    if (a.size() != dim * dim) throw InvalidSpec("Quadratic: A must be dim x dim");
    // symmetrize: b depends on A only through (A + A^T)/2
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = i + 1; j < dim; ++j) {
            const double m = 0.5 * (a[i * dim + j] + a[j * dim + i]);
            a[i * dim + j] = m;
            a[j * dim + i] = m;
        }
    return std::make_shared<EntropySpec>(QuadraticEntropy{std::move(a)}, dim, std::move(norm));
}

EntropyPtr make_ell2_type(std::size_t n_split, std::size_t pairs) {
    return make_ell2_type(n_split, pairs, NormSpec::mixed_l1_l2(2 * n_split, 2 * pairs));
}

EntropyPtr make_ell2_type(std::size_t n_split, std::size_t pairs, NormSpec norm) {
    return std::make_shared<EntropySpec>(Ell2Type{n_split, pairs}, 2 * pairs, std::move(norm));
}

}  // namespace bregkit
