#include "bregkit/norms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bregkit/rng.hpp"

namespace bregkit {

NormSpec NormSpec::lp(double p, std::size_t dim) {
    if (!(p >= 1.0))  // accepts +inf
        throw InvalidSpec("NormSpec: p must be in [1, inf]");
    if (dim == 0) throw InvalidSpec("NormSpec: dim must be >= 1");
    return NormSpec(Kind::Lp, p, 0, dim);
}

NormSpec NormSpec::mixed_l1_l2(std::size_t split, std::size_t dim) {
    if (dim == 0) throw InvalidSpec("NormSpec: dim must be >= 1");
    if (split % 2 != 0) throw InvalidSpec("NormSpec: mixed split must be even (2n)");
    if (split > dim) throw InvalidSpec("NormSpec: mixed split exceeds dim");
    return NormSpec(Kind::MixedL1L2, 0.0, split, dim);
}

std::string NormSpec::describe() const {
    std::ostringstream os;
    if (kind_ == Kind::Lp) {
        if (std::isinf(p_))
            os << "lp:inf";
        else
            os << "lp:" << p_;
    } else {
        os << "mixed:" << split_;
    }
    return os.str();
}

double norm_l2(const Vector& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double norm_linf(const Vector& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

double norm_eval(const NormSpec& norm, const Vector& v) {
    require_dim(v, norm.dim(), "norm_eval");
    if (norm.kind() == NormSpec::Kind::Lp) {
        const double p = norm.p();
        if (std::isinf(p)) return norm_linf(v);
        if (p == 2.0) return norm_l2(v);
        if (p == 1.0) {
            double s = 0.0;
            for (double x : v) s += std::fabs(x);
            return s;
        }
        // scale out the max to avoid overflow for large p
        const double m = norm_linf(v);
        if (m == 0.0) return 0.0;
        double s = 0.0;
        for (double x : v) s += std::pow(std::fabs(x) / m, p);
        return m * std::pow(s, 1.0 / p);
    }
    double l1 = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i < norm.split())
            l1 += std::fabs(v[i]);
        else
            sq += v[i] * v[i];
    }
    return l1 + std::sqrt(sq);
}

EquivalenceConstants equivalence_constants(const NormSpec& norm) {
    const double n = static_cast<double>(norm.dim());
    if (norm.kind() == NormSpec::Kind::Lp) {
        const double p = norm.p();
        EquivalenceConstants ec;
        ec.c_inf = 1.0;  // ||v||_inf <= ||v||_p for every p
        ec.c2 = (p >= 2.0) ? 1.0 : std::pow(n, 0.5 - 1.0 / p);
        ec.gamma = std::isinf(p) ? 1.0 : std::pow(n, 1.0 / p);
        return ec;
    }
    // ||x|| <= 2 sqrt(k) ||x||_2 with k l1-pairs; split = 0 is exactly the
    // Euclidean norm.
    const std::size_t pairs = norm.split() / 2;
    EquivalenceConstants ec;
    ec.c_inf = 1.0;
    ec.c2 = (pairs == 0) ? 1.0 : 1.0 / (2.0 * std::sqrt(static_cast<double>(pairs)));
    ec.gamma = static_cast<double>(norm.split()) +
               std::sqrt(static_cast<double>(norm.dim() - norm.split()));
    if (ec.gamma == 0.0) ec.gamma = 1.0;
    return ec;
}

double verify_equivalence_constants(const NormSpec& norm, const EquivalenceConstants& ec,
                                    std::uint64_t seed, std::size_t count) {
    Rng rng(seed);
    double worst = std::numeric_limits<double>::infinity();
    Vector v(norm.dim());
    for (std::size_t i = 0; i < count; ++i) {
        for (auto& x : v) x = rng.normal() * rng.log_uniform(1e-3, 1e3);
        const double a = norm_eval(norm, v);
        const double e2 = norm_l2(v);
        const double einf = norm_linf(v);
        worst = std::min(worst, e2 - ec.c2 * a);
        worst = std::min(worst, ec.c_inf * a - einf);
        worst = std::min(worst, ec.gamma * einf - a);
        if (worst < -1e-12)
            throw InvalidSpec("equivalence constants violated for " + norm.describe());
    }
    return worst;
}

}  // namespace bregkit
