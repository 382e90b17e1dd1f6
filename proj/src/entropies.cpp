#include "bregkit/entropies.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

namespace bregkit {

// ---- GaugeSpec ----

GaugeSpec GaugeSpec::linear(double a) {
    if (!(a > 0.0)) throw InvalidSpec("GaugeSpec: linear coefficient must be > 0");
    GaugeSpec g;
    g.family_ = Family::Linear;
    g.a_ = a;
    return g;
}

GaugeSpec GaugeSpec::power(double a, double e) {
    if (!(a > 0.0)) throw InvalidSpec("GaugeSpec: power coefficient must be > 0");
    if (e == 0.0) throw InvalidSpec("GaugeSpec: power exponent must be nonzero");
    GaugeSpec g;
    g.family_ = Family::Power;
    g.a_ = a;
    g.e_ = e;
    return g;
}

GaugeSpec GaugeSpec::quadratic(double mu) {
    if (!(mu > 0.0)) throw InvalidSpec("GaugeSpec: mu must be > 0");
    GaugeSpec g;
    g.family_ = Family::Quadratic;
    g.mu_ = mu;
    return g;
}

GaugeSpec GaugeSpec::log_gauge() {
    GaugeSpec g;
    g.family_ = Family::Log;
    return g;
}

GaugeSpec GaugeSpec::iterlog_conjectured(double beta) {
    if (!(beta > 0.0 && beta < 1.0)) throw InvalidSpec("GaugeSpec: beta must be in (0,1)");
    GaugeSpec g;
    g.family_ = Family::IterLogConjectured;
    g.a_ = beta;
    return g;
}

double GaugeSpec::eval(double t) const {
    if (t < 0.0) throw InvalidSpec("GaugeSpec: negative argument");
    switch (family_) {
        case Family::Linear: return a_ * t;
        case Family::Power:
            if (t == 0.0) return 0.0;  // psi(0) := 0 also for decreasing powers
            return a_ * std::pow(t, e_);
        case Family::Quadratic: return 0.5 * mu_ * t * t;
        case Family::Log: return 0.25 * std::log1p(t);
        case Family::IterLogConjectured: return a_ * std::log1p(std::log1p(t));
    }
    return 0.0;
}

double GaugeSpec::inverse(double s) const {
    if (s < 0.0) throw InvalidSpec("GaugeSpec: inverse of a negative value");
    switch (family_) {
        case Family::Linear: return s / a_;
        case Family::Power: return std::pow(s / a_, 1.0 / e_);
        case Family::Quadratic: return std::sqrt(2.0 * s / mu_);
        case Family::Log: return std::expm1(4.0 * s);
        case Family::IterLogConjectured: return std::expm1(std::expm1(s / a_));
    }
    return 0.0;
}

std::string GaugeSpec::describe() const {
    std::ostringstream os;
    switch (family_) {
        case Family::Linear: os << a_ << "*t"; break;
        case Family::Power: os << a_ << "*t^" << e_; break;
        case Family::Quadratic: os << "0.5*" << mu_ << "*t^2"; break;
        case Family::Log: os << "0.25*log(1+t)"; break;
        case Family::IterLogConjectured: os << a_ << "*log(1+log(1+t)) [conjectured]"; break;
    }
    return os.str();
}

std::string describe(const SetDescriptor& set) {
    struct V {
        std::string operator()(const SingletonSet&) const { return "singleton"; }
        std::string operator()(const BoxSet&) const { return "box"; }
        std::string operator()(const NormBallInDomain& b) const {
            std::ostringstream os;
            os << "ball(" << b.radius << ")";
            if (b.floor_eps) os << "&floor(" << *b.floor_eps << ")";
            return os.str();
        }
        std::string operator()(const ZoneAnnulus& a) const {
            std::ostringstream os;
            os << "zone&norm>" << a.r;
            return os.str();
        }
        std::string operator()(const ProductSet& p) const {
            std::string out = "product(";
            for (std::size_t i = 0; i < p.factors.size(); ++i) {
                if (i) out += ",";
                out += describe(*p.factors[i]);
            }
            return out + ")";
        }
    };
    return std::visit(V{}, set.region);
}

// ---- metadata ----

namespace {

EntropyMetadata meta_orthant(bool ess, bool closed, std::size_t dim, double lower) {
    EntropyMetadata m;
    m.essentially_smooth = ess;
    m.legendre = ess;  // every catalog entry is essentially strictly convex
    m.dom_closed = closed;
    m.zone_all_space = false;
    m.zone_lower.assign(dim, lower);
    return m;
}

EntropyMetadata meta_full(std::size_t dim) {
    EntropyMetadata m;
    m.essentially_smooth = true;  // vacuous: dom(b) has no boundary
    m.legendre = true;
    m.dom_closed = true;
    m.zone_all_space = true;
    m.zone_lower.assign(dim, -std::numeric_limits<double>::infinity());
    return m;
}

}  // namespace

EntropyMetadata metadata(const EntropySpec& spec) {
    struct V {
        const EntropySpec& spec;

        EntropyMetadata operator()(const Bgs&) const {
            return meta_orthant(true, true, spec.dim(), 0.0);
        }
        EntropyMetadata operator()(const Hct& h) const {
            return meta_orthant(h.q < 1.0, h.q > 0.0, spec.dim(), 0.0);
        }
        EntropyMetadata operator()(const Burg&) const {
            return meta_orthant(true, false, spec.dim(), 0.0);
        }
        EntropyMetadata operator()(const IteratedLog&) const {
            return meta_orthant(true, false, spec.dim(), 1.0);
        }
        EntropyMetadata operator()(const BetaEntropy& b) const {
            return meta_orthant(b.beta <= 1.0, b.beta > 0.0, spec.dim(), 0.0);
        }
        EntropyMetadata operator()(const AlphaBeta&) const {
            return meta_orthant(true, true, spec.dim(), 0.0);
        }
        EntropyMetadata operator()(const L2Lp&) const { return meta_full(spec.dim()); }
        EntropyMetadata operator()(const QuadraticEntropy&) const { return meta_full(spec.dim()); }
        EntropyMetadata operator()(const Ell2Type&) const { return meta_full(spec.dim()); }
        EntropyMetadata operator()(const Scaled& s) const { return metadata(*s.inner); }
        EntropyMetadata operator()(const PlusLinear& p) const { return metadata(*p.inner); }
        EntropyMetadata operator()(const SumOf& s) const {
            EntropyMetadata m = metadata(*s.terms.front().second);
            for (std::size_t k = 1; k < s.terms.size(); ++k) {
                const EntropyMetadata mk = metadata(*s.terms[k].second);
                // a single blowing member dominates the summed gradient
                m.essentially_smooth = m.essentially_smooth || mk.essentially_smooth;
                m.legendre = m.legendre || mk.legendre;
                m.dom_closed = m.dom_closed && mk.dom_closed;
                m.zone_all_space = m.zone_all_space && mk.zone_all_space;
                for (std::size_t i = 0; i < m.zone_lower.size(); ++i)
                    m.zone_lower[i] = std::max(m.zone_lower[i], mk.zone_lower[i]);
            }
            return m;
        }
        EntropyMetadata operator()(const Translated& t) const {
            EntropyMetadata m = metadata(*t.inner);
            for (std::size_t i = 0; i < m.zone_lower.size(); ++i) m.zone_lower[i] -= t.z0[i];
            return m;
        }
        EntropyMetadata operator()(const DirectSumOf& d) const {
            EntropyMetadata m;
            m.essentially_smooth = true;
            m.legendre = true;
            m.dom_closed = true;
            m.zone_all_space = true;
            for (const auto& b : d.blocks) {
                const EntropyMetadata mb = metadata(*b);
                m.essentially_smooth = m.essentially_smooth && mb.essentially_smooth;
                m.legendre = m.legendre && mb.legendre;
                m.dom_closed = m.dom_closed && mb.dom_closed;
                m.zone_all_space = m.zone_all_space && mb.zone_all_space;
                m.zone_lower.insert(m.zone_lower.end(), mb.zone_lower.begin(),
                                    mb.zone_lower.end());
            }
            return m;
        }
    };
    return std::visit(V{spec}, spec.node());
}

// ---- documented strong convexity ----

namespace {

double quadratic_lambda_min(const QuadraticEntropy& q, std::size_t n) {
    Eigen::MatrixXd a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = q.a[i * n + j];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

StrongConvexityCertificate make_cert(double m_s, std::optional<double> floor_eps, double mu,
                                     std::string provenance) {
    if (!(mu > 0.0)) throw NoDocumentedParameter("documented mu is not positive");
    return StrongConvexityCertificate{ball_in_domain(m_s, floor_eps), mu,
                                      std::move(provenance)};
}

}  // namespace

StrongConvexityCertificate documented_strong_convexity(const EntropySpec& spec, double m_s,
                                                       std::optional<double> eps_floor) {
    if (!(m_s > 0.0)) throw InvalidSpec("documented_strong_convexity: M_S must be > 0");
    const EquivalenceConstants ec = equivalence_constants(spec.norm());
    const double c2 = ec.c2, ci = ec.c_inf;

    struct V {
        const EntropySpec& spec;
        double m_s;
        std::optional<double> eps_floor;
        double c2, ci;

        StrongConvexityCertificate operator()(const Bgs&) const {
            return make_cert(m_s, eps_floor, c2 * c2 / (ci * m_s), "mu = c2^2/(c_inf*M_S)");
        }
        StrongConvexityCertificate operator()(const Hct& h) const {
            if (h.q == 2.0)
                return make_cert(m_s, eps_floor, 2.0 * c2 * c2, "mu = 2*c2^2 (global)");
            if (h.q > 2.0) {
                if (!eps_floor)
                    throw NoDocumentedParameter(
                        "hct q>2: no bounded-set parameter without a coordinate floor");
                const double eps = *eps_floor;
                if (!(eps > 0.0)) throw InvalidSpec("hct q>2: floor must be > 0");
                return make_cert(m_s, eps_floor, h.q * c2 * c2 * std::pow(eps, h.q - 2.0),
                                 "mu = q*c2^2*eps^(q-2)");
            }
            return make_cert(m_s, eps_floor,
                             std::fabs(h.q) * c2 * c2 * std::pow(ci * m_s, h.q - 2.0),
                             "mu = |q|*c2^2/(c_inf*M_S)^(2-q)");
        }
        StrongConvexityCertificate operator()(const Burg&) const {
            return make_cert(m_s, eps_floor, c2 * c2 / (ci * ci * m_s * m_s),
                             "mu = c2^2/(c_inf*M_S)^2");
        }
        StrongConvexityCertificate operator()(const IteratedLog&) const {
            const double t = ci * m_s;
            if (!(t > 1.0))
                throw NoDocumentedParameter("iterlog: ball of radius M_S misses the zone");
            const double zl = t * std::log(t);
            return make_cert(m_s, eps_floor, c2 * c2 * (1.0 / zl) * (1.0 / zl + 1.0 / t),
                             "mu = c2^2*(1/(T log T))*(1/(T log T)+1/T), T = c_inf*M_S");
        }
        StrongConvexityCertificate operator()(const BetaEntropy& b) const {
            if (b.beta > 2.0) {
                if (!eps_floor)
                    throw NoDocumentedParameter(
                        "beta>2: no bounded-set parameter without a coordinate floor");
                return make_cert(m_s, eps_floor, c2 * c2 * std::pow(*eps_floor, b.beta - 2.0),
                                 "mu = c2^2*eps^(beta-2)");
            }
            return make_cert(m_s, eps_floor, c2 * c2 * std::pow(ci * m_s, b.beta - 2.0),
                             "mu = c2^2/(c_inf*M_S)^(2-beta)");
        }
        StrongConvexityCertificate operator()(const AlphaBeta& ab) const {
            const double coef = ab.beta * (1.0 - ab.beta);
            return make_cert(m_s, eps_floor,
                             coef * c2 * c2 * std::pow(ci * m_s, ab.beta - 2.0),
                             "mu = beta*(1-beta)*c2^2/(c_inf*M_S)^(2-beta)");
        }
        StrongConvexityCertificate operator()(const L2Lp& l) const {
            return make_cert(m_s, eps_floor, (l.p - 1.0) * c2 * c2,
                             "mu = (p-1)*c2^2 (global)");
        }
        StrongConvexityCertificate operator()(const QuadraticEntropy& q) const {
            const double lmin = quadratic_lambda_min(q, spec.dim());
            return make_cert(m_s, eps_floor, lmin * c2 * c2,
                             "mu = lambda_min(A)*c2^2 (global)");
        }
        StrongConvexityCertificate operator()(const Ell2Type&) const {
            return make_cert(m_s, eps_floor, 4.0 * c2 * c2, "mu = 4*c2^2 (global)");
        }
        StrongConvexityCertificate operator()(const Scaled& s) const {
            StrongConvexityCertificate c = documented_strong_convexity(*s.inner, m_s, eps_floor);
            c.mu *= s.lambda;
            c.provenance = "lambda * (" + c.provenance + ")";
            return c;
        }
        StrongConvexityCertificate operator()(const PlusLinear& p) const {
            return documented_strong_convexity(*p.inner, m_s, eps_floor);
        }
        StrongConvexityCertificate operator()(const SumOf& s) const {
            double mu = 0.0;
            std::size_t documented = 0;
            for (const auto& [w, t] : s.terms) {
                try {
                    mu += w * documented_strong_convexity(*t, m_s, eps_floor).mu;
                    ++documented;
                } catch (const NoDocumentedParameter&) {
                    // convex member still contributes a nonnegative gap
                }
            }
            if (documented == 0)
                throw NoDocumentedParameter("sum: no member has a documented parameter");
            return make_cert(m_s, eps_floor, mu, "mu = sum of weighted member parameters");
        }
        StrongConvexityCertificate operator()(const Translated& t) const {
            const double shift = norm_eval(spec.norm(), t.z0);
            StrongConvexityCertificate c =
                documented_strong_convexity(*t.inner, m_s + shift, eps_floor);
            c.set = ball_in_domain(m_s, eps_floor);
            c.provenance += " at M_S + ||z0||";
            return c;
        }
        StrongConvexityCertificate operator()(const DirectSumOf& d) const {
            double mu_min = std::numeric_limits<double>::infinity();
            ProductSet prod;
            for (const auto& b : d.blocks) {
                StrongConvexityCertificate cb = documented_strong_convexity(*b, m_s, eps_floor);
                mu_min = std::min(mu_min, cb.mu);
                prod.factors.push_back(std::make_shared<SetDescriptor>(cb.set));
            }
            StrongConvexityCertificate c;
            c.set = SetDescriptor{std::move(prod)};
            c.mu = d.c * d.c * mu_min;
            c.provenance = "mu = c^2 * min(block mu)";
            return c;
        }
    };
    return std::visit(V{spec, m_s, eps_floor, c2, ci}, spec.node());
}

// ---- documented relative gauges ----

namespace {

double annulus_cap(double r) { return std::max(10.0 * r, r + 100.0); }

std::pair<GaugeSpec, PairDomainSpec> gauge_with_annulus(GaugeSpec g, const Vector& x, double r) {
    PairDomainSpec pd{singleton_set(x), zone_annulus(r, annulus_cap(r))};
    return {std::move(g), std::move(pd)};
}

}  // namespace

std::pair<GaugeSpec, PairDomainSpec> documented_gauge(const EntropySpec& spec, const Vector& x) {
    require_dim(x, spec.dim(), "documented_gauge");
    if (classify(spec, x) == DomainStatus::OutsideDomain)
        throw NotInZone("documented_gauge: x outside dom(b)");
    const EquivalenceConstants ec = equivalence_constants(spec.norm());
    const double c2 = ec.c2, ci = ec.c_inf;
    const double nx = norm_eval(spec.norm(), x);

    if (std::holds_alternative<Bgs>(spec.node()))
        return gauge_with_annulus(GaugeSpec::linear(c2 * c2 / (4.0 * ci)), x, 2.0 * nx);

    if (const auto* h = std::get_if<Hct>(&spec.node())) {
        if (h->q == 2.0)
            return gauge_with_annulus(GaugeSpec::quadratic(2.0 * c2 * c2), x, 0.0);
        if (h->q > 2.0)
            throw NoDocumentedGauge("hct q>2: no documented gauge away from floored boxes");
        const double a =
            std::fabs(h->q) * c2 * c2 / (std::pow(ci, 2.0 - h->q) * std::pow(2.0, 3.0 - h->q));
        return gauge_with_annulus(GaugeSpec::power(a, h->q), x, 2.0 * nx);
    }

    if (std::holds_alternative<Burg>(spec.node())) {
        if (classify(spec, x) != DomainStatus::Interior)
            throw NotInZone("documented_gauge: burg needs x in the zone");
        const double rx = burg_rx(x, spec.norm());
        return gauge_with_annulus(GaugeSpec::log_gauge(), x, rx);
    }

    if (std::holds_alternative<IteratedLog>(spec.node()))
        throw NoDocumentedGauge("iterlog: only a conjectured gauge exists");

    if (const auto* s = std::get_if<Scaled>(&spec.node())) {
        auto [g, pd] = documented_gauge(*s->inner, x);
        switch (g.family()) {
            case GaugeSpec::Family::Linear: g = GaugeSpec::linear(s->lambda * g.a()); break;
            case GaugeSpec::Family::Power:
                g = GaugeSpec::power(s->lambda * g.a(), g.e());
                break;
            case GaugeSpec::Family::Quadratic: g = GaugeSpec::quadratic(s->lambda * g.mu()); break;
            default:
                throw NoDocumentedGauge("scaled: inner gauge family does not scale in closed form");
        }
        return {g, pd};
    }
    if (const auto* p = std::get_if<PlusLinear>(&spec.node()))
        return documented_gauge(*p->inner, x);

    throw NoDocumentedGauge("no documented gauge for " + spec.describe());
}

std::pair<GaugeSpec, PairDomainSpec> conjectured_iterlog_gauge(const EntropySpec& spec,
                                                               const Vector& x, double beta) {
    if (!std::holds_alternative<IteratedLog>(spec.node()))
        throw InvalidSpec("conjectured gauge only applies to the iterated log entropy");
    if (classify(spec, x) != DomainStatus::Interior)
        throw NotInZone("conjectured_iterlog_gauge: x not in the zone");
    const double nx = norm_eval(spec.norm(), x);
    return gauge_with_annulus(GaugeSpec::iterlog_conjectured(beta), x, 2.0 * nx);
}

// ---- Burg r_x ----

BurgRadius burg_rx_details(const Vector& x, const NormSpec& norm) {
    require_dim(x, norm.dim(), "burg_rx");
    for (double v : x)
        if (!(v > 0.0)) throw NotInZone("burg_rx: x must be strictly positive");
    const double gamma = equivalence_constants(norm).gamma;

    double t1 = 0.0;
    for (double v : x) t1 = std::max(t1, kBurgS1 * gamma * v);

    // unique root of f(t) = 0.5 log(t/(2 gamma ||x||_inf)) - 4 - 0.25 log(1+t);
    // f is strictly increasing on (0, inf)
    const double xinf = norm_linf(x);
    const auto f = [&](double t) {
        return 0.5 * std::log(t / (2.0 * gamma * xinf)) - 4.0 - 0.25 * std::log1p(t);
    };
    double lo = 1e-9, hi = 1.0;
    while (f(hi) <= 0.0) {
        hi *= 8.0;
        if (hi > 1e30) throw BregkitError("burg_rx: bracketing failed");
    }
    if (f(lo) >= 0.0) lo = hi / 8.0;
    for (int it = 0; it < 200 && hi - lo > 1e-6; ++it) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) > 0.0 ? hi : lo) = mid;
    }
    // round up so the strict inequality direction is preserved for t > t2
    const double t2 = std::nextafter(hi, std::numeric_limits<double>::infinity());

    BurgRadius r;
    r.t1 = t1;
    r.t2 = t2;
    r.gamma = gamma;
    r.rx = std::max({t1, 2.0 * t2, 2.0 * norm_eval(norm, x)});
    return r;
}

double burg_rx(const Vector& x, const NormSpec& norm) { return burg_rx_details(x, norm).rx; }

}  // namespace bregkit
