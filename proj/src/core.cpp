#include "bregkit/core.hpp"

#include <algorithm>
#include <cmath>

#include "bregkit/rng.hpp"

namespace bregkit {

namespace {

// Ell2Type squares beyond this would overflow exp(); the mathematical value is
// still finite, so this is an error, not +inf.
constexpr double kSquareCap = 700.0;

double dot(const Vector& a, const Vector& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

Vector sum_vec(const Vector& a, const Vector& b) {
    Vector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

Vector slice(const Vector& x, std::size_t off, std::size_t n) {
    return Vector(x.begin() + off, x.begin() + off + n);
}

DomainStatus orthant_closed(const Vector& x) {
    bool boundary = false;
    for (double v : x) {
        if (v < 0.0) return DomainStatus::OutsideDomain;
        if (v == 0.0) boundary = true;
    }
    return boundary ? DomainStatus::BoundaryInDomain : DomainStatus::Interior;
}

DomainStatus open_above(const Vector& x, double lo) {
    for (double v : x)
        if (!(v > lo)) return DomainStatus::OutsideDomain;
    return DomainStatus::Interior;
}

DomainStatus worse(DomainStatus a, DomainStatus b) {
    if (a == DomainStatus::OutsideDomain || b == DomainStatus::OutsideDomain)
        return DomainStatus::OutsideDomain;
    if (a == DomainStatus::BoundaryInDomain || b == DomainStatus::BoundaryInDomain)
        return DomainStatus::BoundaryInDomain;
    return DomainStatus::Interior;
}

DomainStatus classify_impl(const EntropySpec& spec, const Vector& x);

struct ClassifyVisitor {
    const EntropySpec& spec;
    const Vector& x;

    DomainStatus operator()(const Bgs&) const { return orthant_closed(x); }
    DomainStatus operator()(const Hct& h) const {
        return h.q > 0.0 ? orthant_closed(x) : open_above(x, 0.0);
    }
    DomainStatus operator()(const Burg&) const { return open_above(x, 0.0); }
    DomainStatus operator()(const IteratedLog&) const { return open_above(x, 1.0); }
    DomainStatus operator()(const BetaEntropy& b) const {
        return b.beta > 0.0 ? orthant_closed(x) : open_above(x, 0.0);
    }
    DomainStatus operator()(const AlphaBeta&) const { return orthant_closed(x); }
    DomainStatus operator()(const L2Lp&) const { return DomainStatus::Interior; }
    DomainStatus operator()(const QuadraticEntropy&) const { return DomainStatus::Interior; }
    DomainStatus operator()(const Ell2Type&) const { return DomainStatus::Interior; }
    DomainStatus operator()(const Scaled& s) const { return classify_impl(*s.inner, x); }
    DomainStatus operator()(const PlusLinear& p) const { return classify_impl(*p.inner, x); }
    DomainStatus operator()(const SumOf& s) const {
        DomainStatus st = DomainStatus::Interior;
        for (const auto& [w, t] : s.terms) st = worse(st, classify_impl(*t, x));
        return st;
    }
    DomainStatus operator()(const Translated& t) const {
        return classify_impl(*t.inner, sum_vec(x, t.z0));
    }
    DomainStatus operator()(const DirectSumOf& d) const {
        DomainStatus st = DomainStatus::Interior;
        std::size_t off = 0;
        for (const auto& b : d.blocks) {
            st = worse(st, classify_impl(*b, slice(x, off, b->dim())));
            off += b->dim();
        }
        return st;
    }
};

DomainStatus classify_impl(const EntropySpec& spec, const Vector& x) {
    return std::visit(ClassifyVisitor{spec, x}, spec.node());
}

void check_square_cap(double t) {
    if (t * t > kSquareCap)
        throw OverflowError("Ell2Type: (x_{2i-1} +/- x_{2i})^2 exceeds the exp() range");
}

// finite value; caller guarantees x is in dom(b)
double value_impl(const EntropySpec& spec, const Vector& x);

struct ValueVisitor {
    const EntropySpec& spec;
    const Vector& x;

    double operator()(const Bgs&) const {
        double s = 0.0;
        for (double v : x)
            if (v > 0.0) s += v * std::log(v);  // 0 log 0 := 0
        return s;
    }
    double operator()(const Hct& h) const {
        const double coef = h.q > 0.0 ? 1.0 / (h.q - 1.0) : 1.0 / (1.0 - h.q);
        double s = 0.0;
        for (double v : x) s += std::pow(v, h.q) - 1.0;
        return coef * s;
    }
    double operator()(const Burg&) const {
        double s = 0.0;
        for (double v : x) s -= std::log(v);
        return s;
    }
    double operator()(const IteratedLog&) const {
        double s = 0.0;
        for (double v : x) s -= std::log(std::log(v));
        return s;
    }
    double operator()(const BetaEntropy& b) const {
        double s = 0.0;
        if (b.beta == 1.0) {
            for (double v : x) s += (v > 0.0 ? v * std::log(v) : 0.0) - v + 1.0;
        } else if (b.beta == 0.0) {
            for (double v : x) s += v - std::log(v) + 1.0;
        } else {
            const double coef = 1.0 / (b.beta * (b.beta - 1.0));
            for (double v : x) s += coef * (std::pow(v, b.beta) - b.beta * v + b.beta - 1.0);
        }
        return s;
    }
    double operator()(const AlphaBeta& ab) const {
        double s = 0.0;
        for (double v : x) s += std::pow(v, ab.alpha) - std::pow(v, ab.beta);
        return s;
    }
    double operator()(const L2Lp& l) const {
        double s = 0.0;
        for (double v : x) s += std::pow(std::fabs(v), l.p);
        return 0.5 * std::pow(s, 2.0 / l.p);
    }
    double operator()(const QuadraticEntropy& q) const {
        const std::size_t n = x.size();
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double row = 0.0;
            for (std::size_t j = 0; j < n; ++j) row += q.a[i * n + j] * x[j];
            s += x[i] * row;
        }
        return 0.5 * s;
    }
    double operator()(const Ell2Type& e) const {
        double s = 0.0;
        for (std::size_t i = 0; i < e.pairs; ++i) {
            const double u = x[2 * i] + x[2 * i + 1];
            const double v = x[2 * i] - x[2 * i + 1];
            check_square_cap(u);
            check_square_cap(v);
            s += std::expm1(u * u) + std::expm1(v * v);
        }
        return s;
    }
    double operator()(const Scaled& s) const { return s.lambda * value_impl(*s.inner, x); }
    double operator()(const PlusLinear& p) const { return value_impl(*p.inner, x) + dot(p.ell, x); }
    double operator()(const SumOf& s) const {
        double acc = 0.0;
        for (const auto& [w, t] : s.terms) acc += w * value_impl(*t, x);
        return acc;
    }
    double operator()(const Translated& t) const { return value_impl(*t.inner, sum_vec(x, t.z0)); }
    double operator()(const DirectSumOf& d) const {
        double acc = 0.0;
        std::size_t off = 0;
        for (const auto& b : d.blocks) {
            acc += value_impl(*b, slice(x, off, b->dim()));
            off += b->dim();
        }
        return acc;
    }
};

double value_impl(const EntropySpec& spec, const Vector& x) {
    return std::visit(ValueVisitor{spec, x}, spec.node());
}

Vector grad_impl(const EntropySpec& spec, const Vector& x);

struct GradVisitor {
    const EntropySpec& spec;
    const Vector& x;

    Vector operator()(const Bgs&) const {
        Vector g(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) g[i] = std::log(x[i]) + 1.0;
        return g;
    }
    Vector operator()(const Hct& h) const {
        const double coef = std::fabs(h.q) / (h.q - 1.0);
        Vector g(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) g[i] = coef * std::pow(x[i], h.q - 1.0);
        return g;
    }
    Vector operator()(const Burg&) const {
        Vector g(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) g[i] = -1.0 / x[i];
        return g;
    }
    Vector operator()(const IteratedLog&) const {
        Vector g(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) g[i] = -1.0 / (x[i] * std::log(x[i]));
        return g;
    }
    Vector operator()(const BetaEntropy& b) const {
        Vector g(x.size());
        if (b.beta == 1.0) {
            for (std::size_t i = 0; i < x.size(); ++i) g[i] = std::log(x[i]);
        } else if (b.beta == 0.0) {
            for (std::size_t i = 0; i < x.size(); ++i) g[i] = 1.0 - 1.0 / x[i];
        } else {
            for (std::size_t i = 0; i < x.size(); ++i)
                g[i] = (std::pow(x[i], b.beta - 1.0) - 1.0) / (b.beta - 1.0);
        }
        return g;
    }
    Vector operator()(const AlphaBeta& ab) const {
        Vector g(x.size());
        for (std::size_t i = 0; i < x.size(); ++i)
            g[i] = ab.alpha * std::pow(x[i], ab.alpha - 1.0) -
                   ab.beta * std::pow(x[i], ab.beta - 1.0);
        return g;
    }
    Vector operator()(const L2Lp& l) const {
        double s = 0.0;
        for (double v : x) s += std::pow(std::fabs(v), l.p);
        Vector g(x.size(), 0.0);
        if (s == 0.0) return g;  // b'(0) = 0
        const double outer = std::pow(s, 2.0 / l.p - 1.0);
        for (std::size_t i = 0; i < x.size(); ++i)
            g[i] = outer * std::pow(std::fabs(x[i]), l.p - 1.0) * (x[i] < 0.0 ? -1.0 : 1.0) *
                   (x[i] == 0.0 ? 0.0 : 1.0);
        return g;
    }
    Vector operator()(const QuadraticEntropy& q) const {
        const std::size_t n = x.size();
        Vector g(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) g[i] += q.a[i * n + j] * x[j];
        return g;
    }
    Vector operator()(const Ell2Type& e) const {
        Vector g(x.size());
        for (std::size_t i = 0; i < e.pairs; ++i) {
            const double u = x[2 * i] + x[2 * i + 1];
            const double v = x[2 * i] - x[2 * i + 1];
            check_square_cap(u);
            check_square_cap(v);
            const double eu = 2.0 * u * std::exp(u * u);
            const double ev = 2.0 * v * std::exp(v * v);
            g[2 * i] = eu + ev;
            g[2 * i + 1] = eu - ev;
        }
        return g;
    }
    Vector operator()(const Scaled& s) const {
        Vector g = grad_impl(*s.inner, x);
        for (auto& v : g) v *= s.lambda;
        return g;
    }
    Vector operator()(const PlusLinear& p) const {
        Vector g = grad_impl(*p.inner, x);
        for (std::size_t i = 0; i < g.size(); ++i) g[i] += p.ell[i];
        return g;
    }
    Vector operator()(const SumOf& s) const {
        Vector g(x.size(), 0.0);
        for (const auto& [w, t] : s.terms) {
            Vector gt = grad_impl(*t, x);
            for (std::size_t i = 0; i < g.size(); ++i) g[i] += w * gt[i];
        }
        return g;
    }
    Vector operator()(const Translated& t) const { return grad_impl(*t.inner, sum_vec(x, t.z0)); }
    Vector operator()(const DirectSumOf& d) const {
        Vector g;
        g.reserve(x.size());
        std::size_t off = 0;
        for (const auto& b : d.blocks) {
            Vector gb = grad_impl(*b, slice(x, off, b->dim()));
            g.insert(g.end(), gb.begin(), gb.end());
            off += b->dim();
        }
        return g;
    }
};

Vector grad_impl(const EntropySpec& spec, const Vector& x) {
    return std::visit(GradVisitor{spec, x}, spec.node());
}

double hessq_impl(const EntropySpec& spec, const Vector& x, const Vector& w);

struct HessqVisitor {
    const EntropySpec& spec;
    const Vector& x;
    const Vector& w;

    double operator()(const Bgs&) const {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * w[i] / x[i];
        return s;
    }
    double operator()(const Hct& h) const {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
            s += std::fabs(h.q) * std::pow(x[i], h.q - 2.0) * w[i] * w[i];
        return s;
    }
    double operator()(const Burg&) const {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * w[i] / (x[i] * x[i]);
        return s;
    }
    double operator()(const IteratedLog&) const {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double zl = x[i] * std::log(x[i]);
            s += (1.0 / zl) * (1.0 / zl + 1.0 / x[i]) * w[i] * w[i];
        }
        return s;
    }
    double operator()(const BetaEntropy& b) const {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
            s += std::pow(x[i], b.beta - 2.0) * w[i] * w[i];
        return s;
    }
    double operator()(const AlphaBeta& ab) const {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double c = ab.alpha * (ab.alpha - 1.0) * std::pow(x[i], ab.alpha - 2.0) +
                             ab.beta * (1.0 - ab.beta) * std::pow(x[i], ab.beta - 2.0);
            s += c * w[i] * w[i];
        }
        return s;
    }
    double operator()(const L2Lp& l) const {
        double s = 0.0;
        for (double v : x) s += std::pow(std::fabs(v), l.p);
        if (s == 0.0) {  // limit at the origin: ||w||_p^2
            double t = 0.0;
            for (double v : w) t += std::pow(std::fabs(v), l.p);
            return std::pow(t, 2.0 / l.p);
        }
        double sw = 0.0, diag = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double ax = std::fabs(x[i]);
            sw += std::pow(ax, l.p - 1.0) * (x[i] < 0.0 ? -1.0 : 1.0) * w[i];
            if (w[i] != 0.0) {
                if (ax == 0.0 && l.p < 2.0)
                    return std::numeric_limits<double>::infinity();
                diag += std::pow(ax, l.p - 2.0) * w[i] * w[i];
            }
        }
        return (2.0 - l.p) * std::pow(s, 2.0 / l.p - 2.0) * sw * sw +
               (l.p - 1.0) * std::pow(s, 2.0 / l.p - 1.0) * diag;
    }
    double operator()(const QuadraticEntropy& q) const {
        const std::size_t n = x.size();
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double row = 0.0;
            for (std::size_t j = 0; j < n; ++j) row += q.a[i * n + j] * w[j];
            s += w[i] * row;
        }
        return s;
    }
    double operator()(const Ell2Type& e) const {
        double s = 0.0;
        for (std::size_t i = 0; i < e.pairs; ++i) {
            const double u = x[2 * i] + x[2 * i + 1];
            const double v = x[2 * i] - x[2 * i + 1];
            check_square_cap(u);
            check_square_cap(v);
            const double wu = w[2 * i] + w[2 * i + 1];
            const double wv = w[2 * i] - w[2 * i + 1];
            s += 2.0 * std::exp(u * u) * (1.0 + 2.0 * u * u) * wu * wu +
                 2.0 * std::exp(v * v) * (1.0 + 2.0 * v * v) * wv * wv;
        }
        return s;
    }
    double operator()(const Scaled& s) const { return s.lambda * hessq_impl(*s.inner, x, w); }
    double operator()(const PlusLinear& p) const { return hessq_impl(*p.inner, x, w); }
    double operator()(const SumOf& s) const {
        double acc = 0.0;
        for (const auto& [wt, t] : s.terms) acc += wt * hessq_impl(*t, x, w);
        return acc;
    }
    double operator()(const Translated& t) const {
        return hessq_impl(*t.inner, sum_vec(x, t.z0), w);
    }
    double operator()(const DirectSumOf& d) const {
        double acc = 0.0;
        std::size_t off = 0;
        for (const auto& b : d.blocks) {
            acc += hessq_impl(*b, slice(x, off, b->dim()), slice(w, off, b->dim()));
            off += b->dim();
        }
        return acc;
    }
};

double hessq_impl(const EntropySpec& spec, const Vector& x, const Vector& w) {
    return std::visit(HessqVisitor{spec, x, w}, spec.node());
}

double closed_impl(const EntropySpec& spec, const Vector& x, const Vector& y);

struct ClosedVisitor {
    const EntropySpec& spec;
    const Vector& x;
    const Vector& y;

    double operator()(const Bgs&) const {
        // Kullback-Leibler: sum x (log(x/y) - 1) + sum y, with the 0 log 0 branch
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
            s += (x[i] == 0.0 ? 0.0 : x[i] * (std::log(x[i] / y[i]) - 1.0)) + y[i];
        return s;
    }
    double operator()(const Hct& h) const {
        const double coef = h.q > 0.0 ? 1.0 / (h.q - 1.0) : 1.0 / (1.0 - h.q);
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
            s += std::pow(x[i], h.q) - std::pow(y[i], h.q) -
                 h.q * std::pow(y[i], h.q - 1.0) * (x[i] - y[i]);
        return coef * s;
    }
    double operator()(const Burg&) const {
        // Itakura-Saito
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
            s += std::log(y[i] / x[i]) + x[i] / y[i] - 1.0;
        return s;
    }
    double operator()(const IteratedLog&) const {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
            s += std::log(std::log(y[i]) / std::log(x[i])) +
                 (x[i] - y[i]) / (y[i] * std::log(y[i]));
        return s;
    }
    double operator()(const BetaEntropy& b) const {
        double s = 0.0;
        if (b.beta == 1.0) {
            for (std::size_t i = 0; i < x.size(); ++i)
                s += (x[i] == 0.0 ? 0.0 : x[i] * std::log(x[i] / y[i])) - x[i] + y[i];
        } else if (b.beta == 0.0) {
            for (std::size_t i = 0; i < x.size(); ++i)
                s += std::log(y[i] / x[i]) + x[i] / y[i] - 1.0;
        } else {
            for (std::size_t i = 0; i < x.size(); ++i) {
                const double xb = std::pow(x[i], b.beta);
                const double yb = std::pow(y[i], b.beta);
                s += (xb - x[i] * std::pow(y[i], b.beta - 1.0)) / (b.beta - 1.0) -
                     (xb - yb) / b.beta;
            }
        }
        return s;
    }
    double operator()(const AlphaBeta& ab) const {
        double s = 0.0;
        if (ab.alpha == 1.0) {
            for (std::size_t i = 0; i < x.size(); ++i)
                s += ab.beta * std::pow(y[i], ab.beta - 1.0) * (x[i] - y[i]) +
                     std::pow(y[i], ab.beta) - std::pow(x[i], ab.beta);
        } else {
            for (std::size_t i = 0; i < x.size(); ++i)
                s += (std::pow(x[i], ab.alpha) - std::pow(x[i], ab.beta)) -
                     (std::pow(y[i], ab.alpha) - std::pow(y[i], ab.beta)) -
                     (x[i] - y[i]) * (ab.alpha * std::pow(y[i], ab.alpha - 1.0) -
                                      ab.beta * std::pow(y[i], ab.beta - 1.0));
        }
        return s;
    }
    double operator()(const L2Lp& l) const {
        double sx = 0.0, sy = 0.0;
        for (double v : x) sx += std::pow(std::fabs(v), l.p);
        for (double v : y) sy += std::pow(std::fabs(v), l.p);
        const double bx = 0.5 * std::pow(sx, 2.0 / l.p);
        const double by = 0.5 * std::pow(sy, 2.0 / l.p);
        if (sy == 0.0) return bx;  // b'(0) = 0
        double inner = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i)
            inner += std::pow(std::fabs(y[i]), l.p - 1.0) * (y[i] < 0.0 ? -1.0 : 1.0) *
                     (y[i] == 0.0 ? 0.0 : 1.0) * (x[i] - y[i]);
        return bx - by - std::pow(sy, 2.0 / l.p - 1.0) * inner;
    }
    double operator()(const QuadraticEntropy& q) const {
        // 0.5 <A(x-y), x-y>
        const std::size_t n = x.size();
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double row = 0.0;
            for (std::size_t j = 0; j < n; ++j) row += q.a[i * n + j] * (x[j] - y[j]);
            s += (x[i] - y[i]) * row;
        }
        return 0.5 * s;
    }
    double operator()(const Ell2Type& e) const {
        double s = 0.0;
        for (std::size_t i = 0; i < e.pairs; ++i) {
            const double ux = x[2 * i] + x[2 * i + 1], vx = x[2 * i] - x[2 * i + 1];
            const double uy = y[2 * i] + y[2 * i + 1], vy = y[2 * i] - y[2 * i + 1];
            check_square_cap(ux);
            check_square_cap(vx);
            check_square_cap(uy);
            check_square_cap(vy);
            const double gu = 2.0 * uy * std::exp(uy * uy);
            const double gv = 2.0 * vy * std::exp(vy * vy);
            s += (std::expm1(ux * ux) - std::expm1(uy * uy)) +
                 (std::expm1(vx * vx) - std::expm1(vy * vy)) -
                 (gu + gv) * (x[2 * i] - y[2 * i]) - (gu - gv) * (x[2 * i + 1] - y[2 * i + 1]);
        }
        return s;
    }
    double operator()(const Scaled& s) const { return s.lambda * closed_impl(*s.inner, x, y); }
    double operator()(const PlusLinear& p) const { return closed_impl(*p.inner, x, y); }
    double operator()(const SumOf& s) const {
        double acc = 0.0;
        for (const auto& [w, t] : s.terms) acc += w * closed_impl(*t, x, y);
        return acc;
    }
    double operator()(const Translated& t) const {
        return closed_impl(*t.inner, sum_vec(x, t.z0), sum_vec(y, t.z0));
    }
    double operator()(const DirectSumOf& d) const {
        double acc = 0.0;
        std::size_t off = 0;
        for (const auto& b : d.blocks) {
            acc += closed_impl(*b, slice(x, off, b->dim()), slice(y, off, b->dim()));
            off += b->dim();
        }
        return acc;
    }
};

double closed_impl(const EntropySpec& spec, const Vector& x, const Vector& y) {
    return std::visit(ClosedVisitor{spec, x, y}, spec.node());
}

void check_point(const EntropySpec& spec, const Vector& v, const char* what) {
    require_dim(v, spec.dim(), what);
    if (!all_finite(v)) throw InvalidSpec(std::string(what) + ": non-finite coordinate");
}

}  // namespace

DomainStatus classify(const EntropySpec& spec, const Vector& x) {
    check_point(spec, x, "classify");
    return classify_impl(spec, x);
}

ExtendedReal value(const EntropySpec& spec, const Vector& x) {
    check_point(spec, x, "value");
    if (classify_impl(spec, x) == DomainStatus::OutsideDomain)
        return ExtendedReal::pos_infinity();
    return ExtendedReal::finite(value_impl(spec, x));
}

Vector grad(const EntropySpec& spec, const Vector& x) {
    check_point(spec, x, "grad");
    if (classify_impl(spec, x) != DomainStatus::Interior)
        throw NotInInterior("grad: point is not in the zone");
    return grad_impl(spec, x);
}

double hessian_quadform(const EntropySpec& spec, const Vector& x, const Vector& w) {
    check_point(spec, x, "hessian_quadform");
    check_point(spec, w, "hessian_quadform direction");
    if (classify_impl(spec, x) != DomainStatus::Interior)
        throw NotInInterior("hessian_quadform: point is not in the zone");
    return hessq_impl(spec, x, w);
}

ExtendedReal divergence_generic(const EntropySpec& spec, const Vector& x, const Vector& y) {
    check_point(spec, x, "divergence x");
    check_point(spec, y, "divergence y");
    if (classify_impl(spec, y) != DomainStatus::Interior ||
        classify_impl(spec, x) == DomainStatus::OutsideDomain)
        return ExtendedReal::pos_infinity();
    if (x == y) return ExtendedReal::finite(0.0);
    const Vector gy = grad_impl(spec, y);
    double inner = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) inner += gy[i] * (x[i] - y[i]);
    return ExtendedReal::finite(value_impl(spec, x) - value_impl(spec, y) - inner);
}

ExtendedReal divergence_closed(const EntropySpec& spec, const Vector& x, const Vector& y) {
    check_point(spec, x, "divergence x");
    check_point(spec, y, "divergence y");
    if (classify_impl(spec, y) != DomainStatus::Interior ||
        classify_impl(spec, x) == DomainStatus::OutsideDomain)
        return ExtendedReal::pos_infinity();
    if (x == y) return ExtendedReal::finite(0.0);
    return ExtendedReal::finite(closed_impl(spec, x, y));
}

double three_point_residual(const EntropySpec& spec, const Vector& x, const Vector& y,
                            const Vector& z) {
    check_point(spec, x, "three_point x");
    if (classify_impl(spec, x) == DomainStatus::OutsideDomain)
        throw SegmentLeavesDomain("three_point_residual: x outside dom(b)");
    if (classify(spec, y) != DomainStatus::Interior)
        throw NotInInterior("three_point_residual: y not in the zone");
    if (classify(spec, z) != DomainStatus::Interior)
        throw NotInInterior("three_point_residual: z not in the zone");
    const double bxz = divergence_closed(spec, x, z).value();
    const double bxy = divergence_closed(spec, x, y).value();
    const double byz = divergence_closed(spec, y, z).value();
    const Vector gy = grad_impl(spec, y);
    const Vector gz = grad_impl(spec, z);
    double inner = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) inner += (gy[i] - gz[i]) * (x[i] - y[i]);
    return bxz - bxy - byz - inner;
}

EntropyPtr scale_plus_linear(const EntropyPtr& spec, double lambda, const Vector& ell) {
    if (!(lambda > 0.0)) throw NonpositiveLambda("scale_plus_linear: lambda must be > 0");
    EntropyPtr scaled =
        std::make_shared<EntropySpec>(Scaled{lambda, spec}, spec->dim(), spec->norm());
    if (ell.empty()) return scaled;
    require_dim(ell, spec->dim(), "scale_plus_linear ell");
    return std::make_shared<EntropySpec>(PlusLinear{ell, scaled}, spec->dim(), spec->norm());
}

EntropyPtr sum_of(const std::vector<std::pair<double, EntropyPtr>>& terms) {
    if (terms.empty()) throw InvalidSpec("sum_of: empty term list");
    return std::make_shared<EntropySpec>(SumOf{terms}, terms.front().second->dim(),
                                         terms.front().second->norm());
}

EntropyPtr translate(const EntropyPtr& spec, const Vector& z0) {
    require_dim(z0, spec->dim(), "translate z0");
    return std::make_shared<EntropySpec>(Translated{z0, spec}, spec->dim(), spec->norm());
}

EntropyPtr direct_sum(const std::vector<EntropyPtr>& blocks, double c, NormSpec total_norm) {
    if (blocks.empty()) throw InvalidSpec("direct_sum: empty block list");
    if (!(c > 0.0)) throw InvalidSpec("direct_sum: c must be > 0");
    std::size_t dim = 0;
    for (const auto& b : blocks) dim += b->dim();
    if (total_norm.dim() != dim) throw DimensionMismatch("direct_sum: total norm dim mismatch");

    // sampled check of sqrt(sum ||x_i||_i^2) >= c ||x||
    Rng rng(0xd5c0de);
    Vector v(dim);
    for (int it = 0; it < 2048; ++it) {
        for (auto& x : v) x = rng.normal() * rng.log_uniform(1e-3, 1e3);
        double hash_sq = 0.0;
        std::size_t off = 0;
        for (const auto& b : blocks) {
            const double nb = norm_eval(b->norm(), Vector(v.begin() + off, v.begin() + off + b->dim()));
            hash_sq += nb * nb;
            off += b->dim();
        }
        const double lhs = std::sqrt(hash_sq);
        const double rhs = c * norm_eval(total_norm, v);
        if (lhs - rhs < -1e-12 * std::max(1.0, rhs))
            throw SemiEquivalenceViolated("direct_sum: sampled vector violates ||.||_# >= c||.||");
    }
    return std::make_shared<EntropySpec>(DirectSumOf{blocks, c}, dim, std::move(total_norm));
}

ExtendedReal divergence_generic(const EntropyPtr& spec, const Vector& x, const Vector& y) {
    return divergence_generic(*spec, x, y);
}
ExtendedReal divergence_closed(const EntropyPtr& spec, const Vector& x, const Vector& y) {
    return divergence_closed(*spec, x, y);
}

}  // namespace bregkit
