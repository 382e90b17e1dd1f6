#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bregkit/entropies.hpp"
#include "bregkit/rng.hpp"

namespace bregkit {

// Reproducibility contract: identical seed + descriptors produce identical
// sample streams, hence byte-for-byte identical reports.
struct Sampler {
    std::uint64_t seed;
    std::size_t count;
};

struct ProbeReport {
    std::string probe;
    std::uint64_t seed = 0;
    std::size_t samples = 0;
    std::size_t violations = 0;
    // min over samples of (satisfied-quantity - required-quantity); negative
    // beyond tolerance at the worst violation
    double worst_margin = std::numeric_limits<double>::infinity();
    std::vector<double> witness;  // inputs of the worst violation, flattened
    bool pass = true;             // pass <=> violations == 0
};

// lambda grid used by the gap probes; the small end matters because the
// lambda -> 0 limit of gap/(lambda(1-lambda)) recovers B(x, y)
const std::vector<double>& lambda_grid();

// Draws a point of `set`; dom/zone information comes from the entropy.
Vector sample_point(const EntropySpec& spec, const SetDescriptor& set, Rng& rng);

// lambda b(x) + (1-lambda) b(y) - b(lambda x + (1-lambda) y); exact 0 at x = y.
ExtendedReal convexity_gap(const EntropySpec& spec, const Vector& x, const Vector& y,
                           double lambda);

struct ModulusBucket {
    double t_lo;
    double t_hi;
    ExtendedReal psi_hat;  // +inf when no pair landed in the bucket
    std::size_t n_samples;
};

struct ModulusTable {
    std::vector<ModulusBucket> buckets;
    std::string pair_desc;
    std::uint64_t seed = 0;
};

// Sampled upper estimate of the optimal relative gauge, bucketed by geometric
// distance bands of the given relative width.
ModulusTable modulus_estimate(const EntropySpec& spec, const SetDescriptor& s1,
                              const SetDescriptor& s2, double t_max, const Sampler& sampler,
                              double bucket_rel_width = 0.05, double t_min_factor = 1e-3);

// Diagnostic check of psi_hat(c t) >= c^2 psi_hat(t), c >= 1, with slack for
// the estimator bias (the estimate is an upper bound of the true modulus).
// Buckets with fewer than min_bucket_samples draws carry estimates too biased
// to compare and sit out.
ProbeReport modulus_scaling_check(const ModulusTable& table, double slack = 0.1,
                                  std::size_t min_bucket_samples = 100);

// Violation when psi(||x-y||) > B(x, y) + tol * max(1, B).
ProbeReport gauge_check(const EntropySpec& spec, const GaugeSpec& gauge,
                        const PairDomainSpec& pair, const Sampler& sampler, double tol = 1e-9);

// Gap route plus Hessian route for a strong convexity certificate.
ProbeReport strong_convexity_check(const EntropySpec& spec,
                                   const StrongConvexityCertificate& cert,
                                   const Sampler& sampler, double tol = 1e-9);

enum class UcWitnessKind { Bgs, HctHalf, Burg, IterLog };

struct UcWitness {
    Vector x;
    Vector y;
    double b_expected;
};

// Explicit pair with divergence decaying in s while the distance stays
// bounded below (or grows, for the HCT q=1/2 kind).
UcWitness uc_failure_witness(UcWitnessKind kind, double s, std::size_t dim);

struct ScWitness {
    Vector x;
    Vector y;
    double ratio;  // B(x,y) / (0.5 ||x-y||_2^2)
};

// q > 2 takes param = eps in (0,1); q in (0,2)\{1} takes param = y1 > 1.
ScWitness sc_failure_witness(double q, double param, std::size_t dim);

// Closed-form ratio bound for the q > 2 witness.
double sc_witness_ratio_bound(double q, double eps);

// For q < 0: threshold t0 such that (t0, inf)^n lies inside L1(x, gamma).
// Requires gamma > max_k n x_k^q / (1 - q); membership is sample-verified.
double hct_negq_levelset_witness(double q, const Vector& x, double gamma);

struct LevelSetReport {
    double sampled_diameter;
    double bound;  // max{2 psi^-1(gamma), 2 r_x, psi^-1(gamma) + r_x + ||x||}
    ProbeReport report;
};

// Ray-searched probe of L1(x, gamma) against the documented diameter bound.
LevelSetReport levelset_probe(const EntropySpec& spec, const Vector& x, double gamma,
                              std::size_t n_directions, std::uint64_t seed);

// Quantitative surrogate on a certified set: ||x-y|| <= sqrt(2 B / mu) + 1e-9.
ProbeReport sequential_consistency_probe(const EntropySpec& spec,
                                         const StrongConvexityCertificate& cert,
                                         const Sampler& sampler);

// d_i = B(x, y_i) - B(y, y_i) along y_i = y + v/i; |d_i - B(x,y)| must shrink
// and land within tol * max(1, |B|) at i = i_last.
ProbeReport limiting_difference_probe(const EntropySpec& spec, const Vector& x, const Vector& y,
                                      const Vector& v, std::size_t i_last = 10000,
                                      double tol = 1e-6);

// ||b'(p + v/i)|| along a geometric schedule: increasing tail, final value
// above threshold. Requires an essentially smooth entropy.
ProbeReport boundary_blowup_probe(const EntropySpec& spec, const Vector& p, const Vector& v,
                                  double i_max = 1e13, double threshold = 1e6);

}  // namespace bregkit
