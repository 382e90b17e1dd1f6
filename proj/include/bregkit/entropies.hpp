#pragma once

#include <optional>
#include <string>

#include "bregkit/core.hpp"
#include "bregkit/sets.hpp"

namespace bregkit {

// Closed-form gauge family psi on [0, inf). The increasing families (linear,
// power with positive exponent, quadratic, log) satisfy psi(0) = 0, strict
// monotonicity and have closed-form inverses; Power admits negative exponents
// to host the q < 0 relative gauge, which is decreasing on (0, inf) and is
// rejected by the level-set machinery.
class GaugeSpec {
public:
    enum class Family { Linear, Power, Quadratic, Log, IterLogConjectured };

    static GaugeSpec linear(double a);             // a * t
    static GaugeSpec power(double a, double e);    // a * t^e, e != 0; psi(0) := 0
    static GaugeSpec quadratic(double mu);         // 0.5 * mu * t^2
    static GaugeSpec log_gauge();                  // 0.25 * log(1 + t)
    static GaugeSpec iterlog_conjectured(double beta);  // beta * log(1 + log(1 + t))

    Family family() const { return family_; }
    double a() const { return a_; }
    double e() const { return e_; }
    double mu() const { return mu_; }
    bool conjectured() const { return family_ == Family::IterLogConjectured; }
    bool increasing() const { return family_ != Family::Power || e_ > 0.0; }

    double eval(double t) const;
    double inverse(double s) const;  // on the increasing branch

    std::string describe() const;

private:
    Family family_;
    double a_ = 0.0;
    double e_ = 0.0;
    double mu_ = 0.0;
};

// The (S1, S2) pair a relative gauge is documented for.
struct PairDomainSpec {
    SetDescriptor s1;
    SetDescriptor s2;
};

struct StrongConvexityCertificate {
    SetDescriptor set;
    double mu;
    std::string provenance;  // which documented formula produced mu
};

struct EntropyMetadata {
    bool essentially_smooth;
    bool legendre;
    bool dom_closed;
    // zone = prod_k (lower[k], inf), or all of R^n
    bool zone_all_space;
    Vector zone_lower;
};

struct BurgRadius {
    double t1;
    double t2;
    double gamma;  // norm comparison constant used
    double rx;
};

EntropyMetadata metadata(const EntropySpec& spec);

// Documented strong convexity parameter on {||w|| <= M_S} cut to dom(b)
// (with the coordinate floor when given). Throws NoDocumentedParameter for
// the cases documented to have none.
StrongConvexityCertificate documented_strong_convexity(const EntropySpec& spec, double m_s,
                                                       std::optional<double> eps_floor = {});

// Documented relative gauge at x together with its admissible pair domain.
std::pair<GaugeSpec, PairDomainSpec> documented_gauge(const EntropySpec& spec, const Vector& x);

// The conjectured iterated-log gauge; flagged, never used by the acceptance
// machinery.
std::pair<GaugeSpec, PairDomainSpec> conjectured_iterlog_gauge(const EntropySpec& spec,
                                                               const Vector& x, double beta);

BurgRadius burg_rx_details(const Vector& x, const NormSpec& norm);
double burg_rx(const Vector& x, const NormSpec& norm);

// Smallest documented s1 threshold for the Burg construction (4^8).
inline constexpr double kBurgS1 = 65536.0;

}  // namespace bregkit
