#include "bregkit/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace bregkit {

const std::vector<double>& lambda_grid() {
    static const std::vector<double> grid = [] {
        std::vector<double> g{0.01};
        for (int k = 1; k <= 19; ++k) g.push_back(0.05 * k);
        g.push_back(0.99);
        return g;
    }();
    return grid;
}

namespace {

void append(std::vector<double>& out, const Vector& v) {
    out.insert(out.end(), v.begin(), v.end());
}

// signed (all-space zone) or orthant-positive ambient-unit direction
Vector unit_direction(const EntropySpec& spec, Rng& rng, bool positive) {
    Vector d(spec.dim());
    double n;
    do {
        for (auto& v : d) {
            v = rng.normal();
            if (positive) v = std::fabs(v);
        }
        n = norm_eval(spec.norm(), d);
    } while (n == 0.0);
    for (auto& v : d) v /= n;
    return d;
}

Vector sample_ball(const EntropySpec& spec, const NormBallInDomain& ball, Rng& rng) {
    const EntropyMetadata meta = metadata(spec);
    const bool positive = !meta.zone_all_space;
    for (int tries = 0; tries < 20000; ++tries) {
        Vector d = unit_direction(spec, rng, positive);
        const double r = ball.radius * std::pow(rng.uniform01(), 1.0 / double(spec.dim()));
        Vector y(spec.dim());
        for (std::size_t k = 0; k < y.size(); ++k) y[k] = r * d[k];
        if (ball.floor_eps) {
            bool ok = true;
            for (double v : y)
                if (v < *ball.floor_eps) ok = false;
            if (!ok) continue;
        }
        if (!meta.zone_all_space) {
            bool ok = true;
            for (std::size_t k = 0; k < y.size(); ++k)
                if (!(y[k] > meta.zone_lower[k])) ok = false;
            if (!ok) continue;
        }
        return y;
    }
    throw EmptyPair("sample_ball: could not draw a point (set may be empty)");
}

Vector sample_annulus(const EntropySpec& spec, const ZoneAnnulus& ann, Rng& rng) {
    const EntropyMetadata meta = metadata(spec);
    const double lo = std::max(ann.r, 1e-8);
    for (int tries = 0; tries < 20000; ++tries) {
        Vector d = unit_direction(spec, rng, !meta.zone_all_space);
        const double r = rng.log_uniform(lo * (1.0 + 1e-12), std::max(ann.r_cap, 2.0 * lo));
        Vector y(spec.dim());
        for (std::size_t k = 0; k < y.size(); ++k) y[k] = r * d[k];
        if (!(norm_eval(spec.norm(), y) > ann.r)) continue;
        if (classify(spec, y) != DomainStatus::Interior) continue;
        return y;
    }
    throw EmptyPair("sample_annulus: could not draw a point in zone & {||w|| > r}");
}

}  // namespace

Vector sample_point(const EntropySpec& spec, const SetDescriptor& set, Rng& rng) {
    struct V {
        const EntropySpec& spec;
        Rng& rng;

        Vector operator()(const SingletonSet& s) const { return s.point; }
        Vector operator()(const BoxSet& b) const {
            Vector y(b.lo.size());
            for (std::size_t k = 0; k < y.size(); ++k) y[k] = rng.uniform(b.lo[k], b.hi[k]);
            return y;
        }
        Vector operator()(const NormBallInDomain& b) const { return sample_ball(spec, b, rng); }
        Vector operator()(const ZoneAnnulus& a) const { return sample_annulus(spec, a, rng); }
        Vector operator()(const ProductSet& p) const {
            const auto* d = std::get_if<DirectSumOf>(&spec.node());
            if (!d || d->blocks.size() != p.factors.size())
                throw InvalidSpec("sample_point: product set requires a matching direct sum");
            Vector y;
            y.reserve(spec.dim());
            for (std::size_t i = 0; i < p.factors.size(); ++i)
                append(y, sample_point(*d->blocks[i], *p.factors[i], rng));
            return y;
        }
    };
    return std::visit(V{spec, rng}, set.region);
}

ExtendedReal convexity_gap(const EntropySpec& spec, const Vector& x, const Vector& y,
                           double lambda) {
    if (!(lambda > 0.0 && lambda < 1.0))
        throw InvalidSpec("convexity_gap: lambda must be in (0,1)");
    if (classify(spec, x) == DomainStatus::OutsideDomain ||
        classify(spec, y) == DomainStatus::OutsideDomain)
        throw SegmentLeavesDomain("convexity_gap: an endpoint is outside dom(b)");
    if (x == y) return ExtendedReal::finite(0.0);
    Vector mid(x.size());
    for (std::size_t k = 0; k < x.size(); ++k)
        mid[k] = lambda * x[k] + (1.0 - lambda) * y[k];
    // dom(b) is convex, so the midpoint stays inside
    const double g = lambda * value(spec, x).value() + (1.0 - lambda) * value(spec, y).value() -
                     value(spec, mid).value();
    return ExtendedReal::finite(g);
}

ModulusTable modulus_estimate(const EntropySpec& spec, const SetDescriptor& s1,
                              const SetDescriptor& s2, double t_max, const Sampler& sampler,
                              double bucket_rel_width, double t_min_factor) {
    if (!(t_max > 0.0)) throw InvalidSpec("modulus_estimate: t_max must be > 0");
    if (sampler.count < 1000)
        throw InvalidSpec("modulus_estimate: needs at least 1000 samples");
    const double w = 1.0 + bucket_rel_width;
    const std::size_t n_buckets =
        static_cast<std::size_t>(std::ceil(std::log(1.0 / t_min_factor) / std::log(w)));

    ModulusTable table;
    table.seed = sampler.seed;
    table.pair_desc = describe(s1) + " x " + describe(s2);
    table.buckets.resize(n_buckets + 1);
    for (std::size_t j = 0; j <= n_buckets; ++j) {
        // bucket j covers (t_max w^-(j+1), t_max w^-j]; the last one reaches 0
        table.buckets[j].t_hi = t_max * std::pow(w, -double(j));
        table.buckets[j].t_lo = (j == n_buckets) ? 0.0 : table.buckets[j].t_hi / w;
        table.buckets[j].psi_hat = ExtendedReal::pos_infinity();
        table.buckets[j].n_samples = 0;
    }

    Rng rng = Rng(sampler.seed).fork(fnv1a("modulus_estimate"));
    std::vector<double> best(n_buckets + 1, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < sampler.count; ++i) {
        const Vector x = sample_point(spec, s1, rng);
        const Vector y = sample_point(spec, s2, rng);
        const double t = norm_eval(spec.norm(), [&] {
            Vector d(x.size());
            for (std::size_t k = 0; k < d.size(); ++k) d[k] = x[k] - y[k];
            return d;
        }());
        if (t <= 0.0 || t > t_max) continue;
        std::size_t j = (t >= t_max) ? 0
                                     : static_cast<std::size_t>(
                                           std::floor(std::log(t_max / t) / std::log(w)));
        j = std::min(j, n_buckets);
        for (double lam : lambda_grid()) {
            const double gap = convexity_gap(spec, x, y, lam).value();
            best[j] = std::min(best[j], gap / (lam * (1.0 - lam)));
        }
        table.buckets[j].n_samples++;
    }
    for (std::size_t j = 0; j <= n_buckets; ++j)
        if (std::isfinite(best[j]))
            table.buckets[j].psi_hat = ExtendedReal::finite(std::max(best[j], 0.0));
    return table;
}

ProbeReport modulus_scaling_check(const ModulusTable& table, double slack,
                                  std::size_t min_bucket_samples) {
    ProbeReport rep;
    rep.probe = "modulus_scaling";
    rep.seed = table.seed;
    for (std::size_t i = 0; i < table.buckets.size(); ++i) {
        const auto& bi = table.buckets[i];
        if (!bi.psi_hat.is_finite() || bi.t_lo <= 0.0) continue;
        if (bi.n_samples < min_bucket_samples) continue;
        for (std::size_t j = 0; j < i; ++j) {  // buckets are ordered by decreasing t
            const auto& bj = table.buckets[j];
            if (!bj.psi_hat.is_finite() || bj.t_lo <= 0.0) continue;
            if (bj.n_samples < min_bucket_samples) continue;
            const double c = bj.t_lo / bi.t_lo;
            if (c < 1.0) continue;
            rep.samples++;
            const double required = (1.0 - slack) * c * c * bi.psi_hat.value();
            const double margin = bj.psi_hat.value() - required + 1e-12;
            if (margin < rep.worst_margin) {
                rep.worst_margin = margin;
                rep.witness = {bi.t_lo, bi.psi_hat.value(), bj.t_lo, bj.psi_hat.value()};
            }
            if (margin < 0.0) rep.violations++;
        }
    }
    if (rep.samples == 0) rep.worst_margin = 0.0;
    rep.pass = rep.violations == 0;
    return rep;
}

ProbeReport gauge_check(const EntropySpec& spec, const GaugeSpec& gauge,
                        const PairDomainSpec& pair, const Sampler& sampler, double tol) {
    ProbeReport rep;
    rep.probe = "gauge_check";
    rep.seed = sampler.seed;
    Rng rng = Rng(sampler.seed).fork(fnv1a("gauge_check"));
    for (std::size_t i = 0; i < sampler.count; ++i) {
        const Vector x = sample_point(spec, pair.s1, rng);
        const Vector y = sample_point(spec, pair.s2, rng);
        Vector d(x.size());
        for (std::size_t k = 0; k < d.size(); ++k) d[k] = x[k] - y[k];
        const double t = norm_eval(spec.norm(), d);
        const ExtendedReal b = divergence_closed(spec, x, y);
        rep.samples++;
        if (b.is_infinite()) continue;  // psi <= +inf trivially
        const double margin = b.value() + tol * std::max(1.0, b.value()) - gauge.eval(t);
        if (margin < rep.worst_margin) {
            rep.worst_margin = margin;
            rep.witness.clear();
            append(rep.witness, x);
            append(rep.witness, y);
        }
        if (margin < 0.0) rep.violations++;
    }
    rep.pass = rep.violations == 0;
    return rep;
}

ProbeReport strong_convexity_check(const EntropySpec& spec,
                                   const StrongConvexityCertificate& cert,
                                   const Sampler& sampler, double tol) {
    ProbeReport rep;
    rep.probe = "strong_convexity_check";
    rep.seed = sampler.seed;
    Rng rng = Rng(sampler.seed).fork(fnv1a("strong_convexity_check"));
    const EntropyMetadata meta = metadata(spec);
    for (std::size_t i = 0; i < sampler.count; ++i) {
        const Vector x = sample_point(spec, cert.set, rng);
        const Vector y = sample_point(spec, cert.set, rng);
        Vector d(x.size());
        for (std::size_t k = 0; k < d.size(); ++k) d[k] = x[k] - y[k];
        const double t = norm_eval(spec.norm(), d);
        rep.samples++;
        for (double lam : lambda_grid()) {
            const double gap = convexity_gap(spec, x, y, lam).value();
            const double required = 0.5 * cert.mu * lam * (1.0 - lam) * t * t;
            const double margin = gap - required + tol * std::max(1.0, gap);
            if (margin < rep.worst_margin) {
                rep.worst_margin = margin;
                rep.witness.clear();
                append(rep.witness, x);
                append(rep.witness, y);
                rep.witness.push_back(lam);
            }
            if (margin < 0.0) rep.violations++;
        }
        // Hessian route: b''(z)(w,w) >= mu for ambient-unit w
        Vector z = sample_point(spec, cert.set, rng);
        if (classify(spec, z) == DomainStatus::Interior) {
            const Vector w = unit_direction(spec, rng, false);
            const double hq = hessian_quadform(spec, z, w);
            const double margin = hq - cert.mu + tol * std::max(1.0, cert.mu);
            if (margin < rep.worst_margin) {
                rep.worst_margin = margin;
                rep.witness.clear();
                append(rep.witness, z);
                append(rep.witness, w);
            }
            if (margin < 0.0) rep.violations++;
        }
    }
    rep.pass = rep.violations == 0;
    return rep;
}

UcWitness uc_failure_witness(UcWitnessKind kind, double s, std::size_t dim) {
    // the pairs live in the zone for every s >= 1; the iterated log kind
    // additionally needs x_1 = s inside (1, inf)
    if (!(s >= 1.0)) throw SOutOfRange("uc_failure_witness: s must be >= 1");
    if (kind == UcWitnessKind::IterLog && !(s > 1.0))
        throw SOutOfRange("uc_failure_witness: the iterated log witness needs s > 1");
    if (dim < 1) throw InvalidSpec("uc_failure_witness: dim must be >= 1");
    const double pad = (kind == UcWitnessKind::IterLog) ? 2.0 : 1.0;
    UcWitness w;
    w.x.assign(dim, pad);
    w.y.assign(dim, pad);
    switch (kind) {
        case UcWitnessKind::Bgs:
            w.x[0] = s;
            w.y[0] = s + 1.0;
            w.b_expected = 1.0 + s * std::log1p(-1.0 / (s + 1.0));
            break;
        case UcWitnessKind::HctHalf: {
            w.x[0] = s + std::sqrt(s);
            w.y[0] = s;
            const double r = std::sqrt(1.0 + 1.0 / std::sqrt(s));
            w.b_expected = (r - 1.0) / (r + 1.0);
            break;
        }
        case UcWitnessKind::Burg:
            w.x[0] = s;
            w.y[0] = s + 1.0;
            w.b_expected = std::log1p(1.0 / s) - 1.0 / (s + 1.0);
            break;
        case UcWitnessKind::IterLog: {
            w.x[0] = s;
            w.y[0] = s + 1.0;
            const double ls = std::log(s);
            const double l1 = std::log1p(1.0 / s);
            w.b_expected = std::log1p(l1 / ls) - 1.0 / ((s + 1.0) * (ls + l1));
            break;
        }
    }
    return w;
}

ScWitness sc_failure_witness(double q, double param, std::size_t dim) {
    if (dim < 1) throw InvalidSpec("sc_failure_witness: dim must be >= 1");
    ScWitness w;
    w.x.assign(dim, 1.0);
    w.y.assign(dim, 1.0);
    if (q > 2.0) {
        if (!(param > 0.0 && param < 1.0))
            throw SOutOfRange("sc_failure_witness: eps must be in (0,1)");
        w.x[0] = 2.0 * param;
        w.y[0] = param;
    } else if (q > 0.0 && q != 1.0) {
        if (!(param > 1.0)) throw SOutOfRange("sc_failure_witness: y1 must be > 1");
        w.y[0] = param;
    } else {
        throw QOutOfRange("sc_failure_witness: q must be > 2 or in (0,2) minus {1}");
    }
    const auto spec = make_hct(q, dim, NormSpec::lp(2.0, dim));
    const double b = divergence_closed(*spec, w.x, w.y).value();
    double d2 = 0.0;
    for (std::size_t k = 0; k < dim; ++k) d2 += (w.x[k] - w.y[k]) * (w.x[k] - w.y[k]);
    w.ratio = b / (0.5 * d2);
    return w;
}

double sc_witness_ratio_bound(double q, double eps) {
    return 2.0 * (std::pow(2.0, q) - 1.0 - q) * std::pow(eps, q - 2.0) / (q - 1.0);
}

double hct_negq_levelset_witness(double q, const Vector& x, double gamma) {
    if (!(q < 0.0)) throw QOutOfRange("hct_negq_levelset_witness: q must be < 0");
    if (x.empty()) throw InvalidSpec("hct_negq_levelset_witness: empty point");
    const double n = static_cast<double>(x.size());
    double limit = 0.0, t0 = 0.0;
    for (double v : x) {
        if (!(v >= 1.0)) throw NotInZone("hct_negq_levelset_witness: x must lie in [1,inf)^n");
        limit = std::max(limit, n * std::pow(v, q) / (1.0 - q));
        t0 = std::max(t0, v);
    }
    if (!(gamma > limit))
        throw GammaTooSmall("hct_negq_levelset_witness: gamma below the admissibility bound");
    // each coordinate term increases toward x_k^q/(1-q) < gamma/n beyond x_k,
    // so every t0 >= max_k x_k works; verify by sampling up to 1e6
    const auto spec = make_hct(q, x.size(), NormSpec::lp(2.0, x.size()));
    Rng rng(0xba11ad ^ static_cast<std::uint64_t>(x.size()));
    Vector y(x.size());
    const double lo = t0 * (1.0 + 1e-9) + 1e-9;
    const double hi = std::max(1e6, 2.0 * lo);
    for (int i = 0; i < 512; ++i) {
        for (auto& v : y) v = rng.log_uniform(lo, hi);
        const ExtendedReal b = divergence_closed(*spec, x, y);
        if (!(b.value() <= gamma))
            throw BregkitError("hct_negq_levelset_witness: sampled membership failed");
    }
    return t0;
}

LevelSetReport levelset_probe(const EntropySpec& spec, const Vector& x, double gamma,
                              std::size_t n_directions, std::uint64_t seed) {
    if (!(gamma >= 0.0)) throw InvalidSpec("levelset_probe: gamma must be >= 0");
    if (classify(spec, x) != DomainStatus::Interior)
        throw NotInZone("levelset_probe: x must lie in the zone");
    auto [gauge, pair] = documented_gauge(spec, x);  // propagates NoDocumentedGauge
    if (!gauge.increasing())
        throw NoDocumentedGauge("levelset_probe: the documented gauge is not increasing");
    const double r_x = std::get<ZoneAnnulus>(pair.s2.region).r;
    const double psi_inv = gauge.inverse(gamma);
    const double nx = norm_eval(spec.norm(), x);
    const double bound = std::max({2.0 * psi_inv, 2.0 * r_x, psi_inv + r_x + nx});

    const auto member = [&](const Vector& y) {
        if (classify(spec, y) != DomainStatus::Interior) return false;
        const ExtendedReal b = divergence_closed(spec, x, y);
        return b.is_finite() && b.value() <= gamma;
    };

    Rng rng = Rng(seed).fork(fnv1a("levelset_probe"));
    std::vector<Vector> hits;
    hits.push_back(x);  // B(x, x) = 0 <= gamma
    for (std::size_t i = 0; i < n_directions; ++i) {
        const Vector d = unit_direction(spec, rng, false);
        const auto at = [&](double t) {
            Vector y(x.size());
            for (std::size_t k = 0; k < y.size(); ++k) y[k] = x[k] + t * d[k];
            return y;
        };
        double lo = 0.0, hi = 1.0;
        int grow = 0;
        while (member(at(hi)) && grow++ < 400) {
            lo = hi;
            hi *= 2.0;
        }
        // B is nondecreasing along rays from x, so membership is the interval [0, t*]
        for (int it = 0; it < 64 && hi - lo > 1e-9 * std::max(1.0, hi); ++it) {
            const double mid = 0.5 * (lo + hi);
            (member(at(mid)) ? lo : hi) = mid;
        }
        hits.push_back(at(lo));
    }
    double diam = 0.0;
    for (std::size_t i = 0; i < hits.size(); ++i)
        for (std::size_t j = i + 1; j < hits.size(); ++j) {
            Vector d(x.size());
            for (std::size_t k = 0; k < d.size(); ++k) d[k] = hits[i][k] - hits[j][k];
            diam = std::max(diam, norm_eval(spec.norm(), d));
        }

    LevelSetReport out;
    out.sampled_diameter = diam;
    out.bound = bound;
    out.report.probe = "levelset_probe";
    out.report.seed = seed;
    out.report.samples = n_directions;
    out.report.worst_margin = bound + 1e-6 - diam;
    out.report.violations = (diam <= bound + 1e-6) ? 0 : 1;
    out.report.pass = out.report.violations == 0;
    out.report.witness = {gamma, diam, bound};
    return out;
}

ProbeReport sequential_consistency_probe(const EntropySpec& spec,
                                         const StrongConvexityCertificate& cert,
                                         const Sampler& sampler) {
    ProbeReport rep;
    rep.probe = "sequential_consistency";
    rep.seed = sampler.seed;
    Rng rng = Rng(sampler.seed).fork(fnv1a("sequential_consistency"));
    for (std::size_t i = 0; i < sampler.count; ++i) {
        const Vector x = sample_point(spec, cert.set, rng);
        Vector y = sample_point(spec, cert.set, rng);
        for (int tries = 0; classify(spec, y) != DomainStatus::Interior && tries < 100; ++tries)
            y = sample_point(spec, cert.set, rng);
        Vector d(x.size());
        for (std::size_t k = 0; k < d.size(); ++k) d[k] = x[k] - y[k];
        const double t = norm_eval(spec.norm(), d);
        const double b = divergence_closed(spec, x, y).value();
        const double margin = std::sqrt(std::max(2.0 * b / cert.mu, 0.0)) + 1e-9 - t;
        rep.samples++;
        if (margin < rep.worst_margin) {
            rep.worst_margin = margin;
            rep.witness.clear();
            append(rep.witness, x);
            append(rep.witness, y);
        }
        if (margin < 0.0) rep.violations++;
    }
    rep.pass = rep.violations == 0;
    return rep;
}

ProbeReport limiting_difference_probe(const EntropySpec& spec, const Vector& x, const Vector& y,
                                      const Vector& v, std::size_t i_last, double tol) {
    require_dim(x, spec.dim(), "limiting_difference x");
    require_dim(y, spec.dim(), "limiting_difference y");
    require_dim(v, spec.dim(), "limiting_difference v");
    if (classify(spec, x) == DomainStatus::OutsideDomain)
        throw NotInZone("limiting_difference_probe: x outside dom(b)");
    if (classify(spec, y) != DomainStatus::Interior)
        throw NotInInterior("limiting_difference_probe: y not in the zone");

    const double b_ref = divergence_closed(spec, x, y).value();
    ProbeReport rep;
    rep.probe = "limiting_difference";
    rep.samples = 0;

    std::vector<std::size_t> schedule;
    for (std::size_t i = 1; i < i_last; i *= 2) schedule.push_back(i);
    schedule.push_back(i_last);

    double prev_err = std::numeric_limits<double>::infinity();
    double final_err = std::numeric_limits<double>::infinity();
    for (std::size_t i : schedule) {
        Vector yi(y.size());
        for (std::size_t k = 0; k < y.size(); ++k) yi[k] = y[k] + v[k] / double(i);
        if (classify(spec, yi) != DomainStatus::Interior)
            throw SequenceLeavesZone("limiting_difference_probe: y + v/i left the zone");
        const double di =
            divergence_closed(spec, x, yi).value() - divergence_closed(spec, y, yi).value();
        const double err = std::fabs(di - b_ref);
        rep.samples++;
        // decreasing error sequence, with an epsilon for roundoff plateaus
        if (err > prev_err + 1e-12 * std::max(1.0, prev_err)) rep.violations++;
        prev_err = err;
        final_err = err;
    }
    const double allowed = tol * std::max(1.0, std::fabs(b_ref));
    rep.worst_margin = allowed - final_err;
    if (final_err > allowed) rep.violations++;
    rep.witness = {b_ref, final_err};
    rep.pass = rep.violations == 0;
    return rep;
}

ProbeReport boundary_blowup_probe(const EntropySpec& spec, const Vector& p, const Vector& v,
                                  double i_max, double threshold) {
    require_dim(p, spec.dim(), "boundary_blowup p");
    require_dim(v, spec.dim(), "boundary_blowup v");
    if (!metadata(spec).essentially_smooth)
        throw NotEssentiallySmooth("boundary_blowup_probe: entropy is not essentially smooth");
    if (classify(spec, p) == DomainStatus::Interior)
        throw InvalidSpec("boundary_blowup_probe: p must lie on the boundary of dom(b)");

    ProbeReport rep;
    rep.probe = "boundary_blowup";
    std::vector<double> gs;
    for (double i = 1.0; i <= i_max; i *= 2.0) {
        Vector yi(p.size());
        for (std::size_t k = 0; k < p.size(); ++k) yi[k] = p[k] + v[k] / i;
        if (classify(spec, yi) != DomainStatus::Interior)
            throw SequenceLeavesZone("boundary_blowup_probe: p + v/i not in the zone");
        gs.push_back(norm_eval(spec.norm(), grad(spec, yi)));
        rep.samples++;
    }
    // the tail (second half of the schedule) must be strictly increasing
    std::size_t tail_breaks = 0;
    for (std::size_t k = gs.size() / 2 + 1; k < gs.size(); ++k)
        if (!(gs[k] > gs[k - 1])) tail_breaks++;
    const double last = gs.back();
    rep.violations = tail_breaks + (last > threshold ? 0 : 1);
    rep.worst_margin = last - threshold;
    rep.witness = {last, threshold};
    rep.pass = rep.violations == 0;
    return rep;
}

}  // namespace bregkit
