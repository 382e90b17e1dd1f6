#include "bregkit/suites.hpp"

#include <cmath>

namespace bregkit {

namespace {

BoxSet cube(std::size_t dim, double lo, double hi) {
    return BoxSet{Vector(dim, lo), Vector(dim, hi)};
}

std::vector<double> random_spd(std::size_t dim, std::uint64_t seed) {
    Rng rng(seed ^ 0x5bd1e995);
    std::vector<double> r(dim * dim);
    for (auto& v : r) v = rng.normal();
    std::vector<double> a(dim * dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < dim; ++k) s += r[k * dim + i] * r[k * dim + j];
            a[i * dim + j] = s / double(dim) + (i == j ? 0.5 : 0.0);
        }
    return a;
}

CatalogEntry entry(std::string name, EntropyPtr spec, BoxSet interior, BoxSet safe) {
    return CatalogEntry{std::move(name), std::move(spec), std::move(interior), std::move(safe)};
}

Vector mid_lambda(const Vector& x, const Vector& y, double lam) {
    Vector m(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) m[k] = lam * x[k] + (1.0 - lam) * y[k];
    return m;
}

}  // namespace

std::vector<CatalogEntry> standard_catalog(std::size_t dim, std::uint64_t seed,
                                           std::size_t ell2_pairs) {
    const NormSpec l2 = NormSpec::lp(2.0, dim);
    const BoxSet orthant = cube(dim, 0.05, 8.0);
    const BoxSet orthant_safe = cube(dim, 0.25, 8.0);
    const BoxSet shifted = cube(dim, 1.05, 10.0);
    const BoxSet shifted_safe = cube(dim, 1.25, 10.0);
    const BoxSet wide = cube(dim, -5.0, 5.0);
    const BoxSet wide_safe = cube(dim, 0.25, 5.0);

    std::vector<CatalogEntry> out;
    out.push_back(entry("bgs", make_bgs(dim, l2), orthant, orthant_safe));
    for (double q : {-1.0, 0.5, 1.5, 2.0, 3.0}) {
        std::string name = "hct(q=" + std::to_string(q).substr(0, 4) + ")";
        out.push_back(entry(std::move(name), make_hct(q, dim, l2), orthant, orthant_safe));
    }
    out.push_back(entry("burg", make_burg(dim, l2), orthant, orthant_safe));
    out.push_back(entry("iterlog", make_iterated_log(dim, l2), shifted, shifted_safe));
    for (double b : {0.0, 0.5, 1.0, 2.0}) {
        std::string name = "beta(" + std::to_string(b).substr(0, 3) + ")";
        out.push_back(entry(std::move(name), make_beta(b, dim, l2), orthant, orthant_safe));
    }
    out.push_back(
        entry("alphabeta(1,0.5)", make_alpha_beta(1.0, 0.5, dim, l2), orthant, orthant_safe));
    out.push_back(
        entry("alphabeta(2,0.5)", make_alpha_beta(2.0, 0.5, dim, l2), orthant, orthant_safe));
    out.push_back(entry("l2lp(1.5)", make_l2lp(1.5, dim, l2), wide, wide_safe));
    out.push_back(entry("quadratic", make_quadratic(random_spd(dim, seed), dim, l2), wide, wide));
    for (std::size_t ns : {std::size_t(0), std::size_t(2)}) {
        const std::size_t edim = 2 * ell2_pairs;
        std::string name = "ell2(n=" + std::to_string(ns) + ")";
        out.push_back(entry(std::move(name), make_ell2_type(ns, ell2_pairs),
                            cube(edim, -1.5, 1.5), cube(edim, -1.5, 1.5)));
    }
    return out;
}

CatalogEntry catalog_entry(const std::string& name, std::size_t dim, const NormSpec& norm,
                           std::optional<double> q, std::optional<double> beta,
                           std::optional<double> alpha, std::optional<double> p,
                           std::size_t ell2_split, std::size_t ell2_pairs, std::uint64_t seed) {
    const BoxSet orthant = cube(dim, 0.05, 8.0);
    const BoxSet orthant_safe = cube(dim, 0.25, 8.0);
    if (name == "bgs") return entry(name, make_bgs(dim, norm), orthant, orthant_safe);
    if (name == "hct") {
        if (!q) throw InvalidSpec("hct requires q");
        return entry(name, make_hct(*q, dim, norm), orthant, orthant_safe);
    }
    if (name == "burg") return entry(name, make_burg(dim, norm), orthant, orthant_safe);
    if (name == "iterlog")
        return entry(name, make_iterated_log(dim, norm), cube(dim, 1.05, 10.0),
                     cube(dim, 1.25, 10.0));
    if (name == "beta") {
        if (!beta) throw InvalidSpec("beta requires beta");
        return entry(name, make_beta(*beta, dim, norm), orthant, orthant_safe);
    }
    if (name == "alphabeta") {
        if (!alpha || !beta) throw InvalidSpec("alphabeta requires alpha and beta");
        return entry(name, make_alpha_beta(*alpha, *beta, dim, norm), orthant, orthant_safe);
    }
    if (name == "l2lp") {
        if (!p) throw InvalidSpec("l2lp requires p");
        return entry(name, make_l2lp(*p, dim, norm), cube(dim, -5.0, 5.0), cube(dim, 0.25, 5.0));
    }
    if (name == "quadratic")
        return entry(name, make_quadratic(random_spd(dim, seed), dim, norm), cube(dim, -5.0, 5.0),
                     cube(dim, -5.0, 5.0));
    if (name == "ell2") {
        const std::size_t pairs = ell2_pairs ? ell2_pairs : std::max<std::size_t>(dim / 2, 1);
        return entry(name, make_ell2_type(ell2_split / 2, pairs), cube(2 * pairs, -1.5, 1.5),
                     cube(2 * pairs, -1.5, 1.5));
    }
    throw InvalidSpec("unknown entropy '" + name + "'");
}

ProbeReport oracle_agreement_probe(const CatalogEntry& e, const Sampler& sampler, double tol) {
    ProbeReport rep;
    rep.probe = "oracle:" + e.name;
    rep.seed = sampler.seed;
    Rng rng = Rng(sampler.seed).fork(fnv1a("oracle") ^ fnv1a(e.name.c_str()));
    const SetDescriptor box{e.interior_box};
    for (std::size_t i = 0; i < sampler.count; ++i) {
        const Vector x = sample_point(*e.spec, box, rng);
        const Vector y = sample_point(*e.spec, box, rng);
        const double closed = divergence_closed(*e.spec, x, y).value();
        const double generic = divergence_generic(*e.spec, x, y).value();
        const double margin =
            tol * std::max(1.0, std::fabs(closed)) - std::fabs(closed - generic);
        rep.samples++;
        if (margin < rep.worst_margin) {
            rep.worst_margin = margin;
            rep.witness.assign(x.begin(), x.end());
            rep.witness.insert(rep.witness.end(), y.begin(), y.end());
        }
        if (margin < 0.0) rep.violations++;
    }
    rep.pass = rep.violations == 0;
    return rep;
}

ProbeReport nonnegativity_probe(const CatalogEntry& e, const Sampler& sampler, double separation,
                                double pos_floor) {
    ProbeReport rep;
    rep.probe = "nonneg:" + e.name;
    rep.seed = sampler.seed;
    Rng rng = Rng(sampler.seed).fork(fnv1a("nonneg") ^ fnv1a(e.name.c_str()));
    const SetDescriptor box{e.interior_box};
    for (std::size_t i = 0; i < sampler.count; ++i) {
        const Vector x = sample_point(*e.spec, box, rng);
        const Vector y = sample_point(*e.spec, box, rng);
        const double b = divergence_closed(*e.spec, x, y).value();
        rep.samples++;
        double margin = b + 1e-12;
        if (divergence_closed(*e.spec, x, x).value() != 0.0) margin = -1.0;  // must be exact
        double d2 = 0.0;
        for (std::size_t k = 0; k < x.size(); ++k) d2 += (x[k] - y[k]) * (x[k] - y[k]);
        if (std::sqrt(d2) >= separation) margin = std::min(margin, b - pos_floor);
        if (margin < rep.worst_margin) {
            rep.worst_margin = margin;
            rep.witness.assign(x.begin(), x.end());
            rep.witness.insert(rep.witness.end(), y.begin(), y.end());
        }
        if (margin < 0.0) rep.violations++;
    }
    rep.pass = rep.violations == 0;
    return rep;
}

namespace {

// central difference step per the documented policy, shrunk when x +/- h e_k
// would leave the zone
double fd_step(const EntropySpec& spec, const Vector& x, std::size_t k) {
    double h = std::max(1e-6, 1e-6 * std::fabs(x[k]));
    Vector t = x;
    for (int shrink = 0; shrink < 60; ++shrink) {
        t[k] = x[k] + h;
        const bool up = classify(spec, t) == DomainStatus::Interior;
        t[k] = x[k] - h;
        const bool dn = classify(spec, t) == DomainStatus::Interior;
        if (up && dn) return h;
        h *= 0.5;
    }
    throw NotInInterior("fd_step: could not keep the stencil inside the zone");
}

}  // namespace

ProbeReport fd_gradient_probe(const CatalogEntry& e, const Sampler& sampler, double tol) {
    ProbeReport rep;
    rep.probe = "fd_grad:" + e.name;
    rep.seed = sampler.seed;
    Rng rng = Rng(sampler.seed).fork(fnv1a("fd_grad") ^ fnv1a(e.name.c_str()));
    const SetDescriptor box{e.safe_box};
    for (std::size_t i = 0; i < sampler.count; ++i) {
        const Vector x = sample_point(*e.spec, box, rng);
        const Vector g = grad(*e.spec, x);
        double gmax = 1.0, emax = 0.0;
        for (double v : g) gmax = std::max(gmax, std::fabs(v));
        Vector t = x;
        for (std::size_t k = 0; k < x.size(); ++k) {
            const double h = fd_step(*e.spec, x, k);
            t[k] = x[k] + h;
            const double up = value(*e.spec, t).value();
            t[k] = x[k] - h;
            const double dn = value(*e.spec, t).value();
            t[k] = x[k];
            emax = std::max(emax, std::fabs((up - dn) / (2.0 * h) - g[k]));
        }
        const double margin = tol - emax / gmax;
        rep.samples++;
        if (margin < rep.worst_margin) {
            rep.worst_margin = margin;
            rep.witness.assign(x.begin(), x.end());
        }
        if (margin < 0.0) rep.violations++;
    }
    rep.pass = rep.violations == 0;
    return rep;
}

ProbeReport fd_hessian_probe(const CatalogEntry& e, const Sampler& sampler, double tol) {
    ProbeReport rep;
    rep.probe = "fd_hess:" + e.name;
    rep.seed = sampler.seed;
    Rng rng = Rng(sampler.seed).fork(fnv1a("fd_hess") ^ fnv1a(e.name.c_str()));
    const SetDescriptor box{e.safe_box};
    for (std::size_t i = 0; i < sampler.count; ++i) {
        const Vector x = sample_point(*e.spec, box, rng);
        Vector w(x.size());
        double nw = 0.0;
        for (auto& v : w) {
            v = rng.normal();
            nw += v * v;
        }
        nw = std::sqrt(nw);
        for (auto& v : w) v /= nw;
        const double hq = hessian_quadform(*e.spec, x, w);
        // shrink the directional step until the whole stencil stays interior
        double h = 1e-6;
        Vector up(x.size()), dn(x.size());
        for (int shrink = 0; shrink < 60; ++shrink) {
            for (std::size_t k = 0; k < x.size(); ++k) {
                up[k] = x[k] + h * w[k];
                dn[k] = x[k] - h * w[k];
            }
            if (classify(*e.spec, up) == DomainStatus::Interior &&
                classify(*e.spec, dn) == DomainStatus::Interior)
                break;
            h *= 0.5;
        }
        const Vector gu = grad(*e.spec, up);
        const Vector gd = grad(*e.spec, dn);
        double fd = 0.0;
        for (std::size_t k = 0; k < x.size(); ++k) fd += (gu[k] - gd[k]) * w[k];
        fd /= 2.0 * h;
        const double margin = tol - std::fabs(fd - hq) / std::max(1.0, std::fabs(hq));
        rep.samples++;
        if (margin < rep.worst_margin) {
            rep.worst_margin = margin;
            rep.witness.assign(x.begin(), x.end());
        }
        if (margin < 0.0) rep.violations++;
    }
    rep.pass = rep.violations == 0;
    return rep;
}

ProbeReport three_point_probe(const CatalogEntry& e, const Sampler& sampler, double tol) {
    ProbeReport rep;
    rep.probe = "three_point:" + e.name;
    rep.seed = sampler.seed;
    Rng rng = Rng(sampler.seed).fork(fnv1a("three_point") ^ fnv1a(e.name.c_str()));
    const SetDescriptor box{e.interior_box};
    for (std::size_t i = 0; i < sampler.count; ++i) {
        const Vector x = sample_point(*e.spec, box, rng);
        const Vector y = sample_point(*e.spec, box, rng);
        const Vector z = sample_point(*e.spec, box, rng);
        const double res = three_point_residual(*e.spec, x, y, z);
        const double bxz = divergence_closed(*e.spec, x, z).value();
        const double margin = tol * std::max(1.0, std::fabs(bxz)) - std::fabs(res);
        rep.samples++;
        if (margin < rep.worst_margin) {
            rep.worst_margin = margin;
            rep.witness.assign(x.begin(), x.end());
            rep.witness.insert(rep.witness.end(), y.begin(), y.end());
            rep.witness.insert(rep.witness.end(), z.begin(), z.end());
        }
        if (margin < 0.0) rep.violations++;
    }
    rep.pass = rep.violations == 0;
    return rep;
}

ProbeReport scaling_combinator_probe(const CatalogEntry& e, const Sampler& sampler, double tol) {
    ProbeReport rep;
    rep.probe = "scale_linear:" + e.name;
    rep.seed = sampler.seed;
    Rng rng = Rng(sampler.seed).fork(fnv1a("scale_linear") ^ fnv1a(e.name.c_str()));
    const SetDescriptor box{e.interior_box};
    for (std::size_t i = 0; i < sampler.count; ++i) {
        const double lambda = rng.log_uniform(0.1, 10.0);
        Vector ell(e.spec->dim());
        for (auto& v : ell) v = rng.normal();
        const auto wrapped = scale_plus_linear(e.spec, lambda, ell);
        const Vector x = sample_point(*e.spec, box, rng);
        const Vector y = sample_point(*e.spec, box, rng);
        const double expect = lambda * divergence_closed(*e.spec, x, y).value();
        const double got = divergence_closed(*wrapped, x, y).value();
        const double margin = tol * std::max(1.0, std::fabs(expect)) - std::fabs(got - expect);
        rep.samples++;
        if (margin < rep.worst_margin) {
            rep.worst_margin = margin;
            rep.witness = {lambda};
        }
        if (margin < 0.0) rep.violations++;
    }
    rep.pass = rep.violations == 0;
    return rep;
}

ProbeReport translation_combinator_probe(const CatalogEntry& e, const Sampler& sampler) {
    ProbeReport rep;
    rep.probe = "translate:" + e.name;
    rep.seed = sampler.seed;
    Rng rng = Rng(sampler.seed).fork(fnv1a("translate") ^ fnv1a(e.name.c_str()));
    const SetDescriptor box{e.interior_box};
    for (std::size_t i = 0; i < sampler.count; ++i) {
        Vector z0(e.spec->dim());
        for (auto& v : z0) v = rng.normal();
        const auto shifted = translate(e.spec, z0);
        const Vector x = sample_point(*e.spec, box, rng);
        const Vector y = sample_point(*e.spec, box, rng);
        Vector xs(x.size()), ys(y.size());
        for (std::size_t k = 0; k < x.size(); ++k) {
            xs[k] = x[k] - z0[k];
            ys[k] = y[k] - z0[k];
        }
        // bit-comparable: the wrapper evaluates the inner entropy at x~ + z0
        const double got = divergence_closed(*shifted, xs, ys).as_double();
        Vector xb(x.size()), yb(y.size());
        for (std::size_t k = 0; k < x.size(); ++k) {
            xb[k] = xs[k] + z0[k];
            yb[k] = ys[k] + z0[k];
        }
        const double expect = divergence_closed(*e.spec, xb, yb).as_double();
        rep.samples++;
        const bool equal = (got == expect) || (std::isinf(got) && std::isinf(expect));
        if (!equal) {
            rep.violations++;
            rep.worst_margin = std::min(rep.worst_margin, -std::fabs(got - expect));
        }
    }
    if (rep.violations == 0) rep.worst_margin = 0.0;
    rep.pass = rep.violations == 0;
    return rep;
}

ProbeReport sum_combinator_probe(const CatalogEntry& a, const CatalogEntry& b,
                                 const Sampler& sampler, double tol) {
    ProbeReport rep;
    rep.probe = "sum:" + a.name + "+" + b.name;
    rep.seed = sampler.seed;
    Rng rng = Rng(sampler.seed).fork(fnv1a("sum_combinator"));
    const double w1 = 0.75, w2 = 1.5;
    const auto s = sum_of({{w1, a.spec}, {w2, b.spec}});
    // intersect the two interior boxes
    BoxSet box = a.interior_box;
    for (std::size_t k = 0; k < box.lo.size(); ++k) {
        box.lo[k] = std::max(box.lo[k], b.interior_box.lo[k]);
        box.hi[k] = std::min(box.hi[k], b.interior_box.hi[k]);
    }
    const SetDescriptor set{box};
    for (std::size_t i = 0; i < sampler.count; ++i) {
        const Vector x = sample_point(*s, set, rng);
        const Vector y = sample_point(*s, set, rng);
        const double expect = w1 * divergence_closed(*a.spec, x, y).value() +
                              w2 * divergence_closed(*b.spec, x, y).value();
        const double got = divergence_closed(*s, x, y).value();
        const double margin = tol * std::max(1.0, std::fabs(expect)) - std::fabs(got - expect);
        rep.samples++;
        if (margin < rep.worst_margin) {
            rep.worst_margin = margin;
            rep.witness.assign(x.begin(), x.end());
        }
        if (margin < 0.0) rep.violations++;
    }
    rep.pass = rep.violations == 0;
    return rep;
}

}  // namespace bregkit
