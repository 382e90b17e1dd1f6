#pragma once

#include <cstddef>
#include <cstdint>

#include "bregkit/types.hpp"

namespace bregkit {

// Norm-comparison constants against the Euclidean and max norms:
//   c2 * ||v|| <= ||v||_2,  ||v||_inf <= c_inf * ||v||,  ||v|| <= gamma * ||v||_inf.
// Valid (not necessarily optimal) for the whole family; downstream strong
// convexity parameters only need validity.
struct EquivalenceConstants {
    double c2;
    double c_inf;
    double gamma;
};

// Norm on R^n: either an lp norm (p in [1, inf]) or the mixed l1/l2 norm
//   ||x|| = sum_{i<split} |x_i| + sqrt(sum_{i>=split} x_i^2),
// split even. split = 0 is the plain Euclidean norm.
class NormSpec {
public:
    enum class Kind { Lp, MixedL1L2 };

    static NormSpec lp(double p, std::size_t dim);
    static NormSpec mixed_l1_l2(std::size_t split, std::size_t dim);

    Kind kind() const { return kind_; }
    double p() const { return p_; }
    std::size_t split() const { return split_; }
    std::size_t dim() const { return dim_; }

    bool operator==(const NormSpec& o) const {
        return kind_ == o.kind_ && p_ == o.p_ && split_ == o.split_ && dim_ == o.dim_;
    }

    std::string describe() const;

private:
    NormSpec(Kind k, double p, std::size_t split, std::size_t dim)
        : kind_(k), p_(p), split_(split), dim_(dim) {}

    Kind kind_;
    double p_;
    std::size_t split_;
    std::size_t dim_;
};

double norm_eval(const NormSpec& norm, const Vector& v);

// Euclidean and max norms, used pervasively by the probes.
double norm_l2(const Vector& v);
double norm_linf(const Vector& v);

EquivalenceConstants equivalence_constants(const NormSpec& norm);

// Sampled validity check of the three inequalities (margin >= -1e-12).
// Returns the worst margin seen; negative beyond tolerance throws InvalidSpec.
double verify_equivalence_constants(const NormSpec& norm, const EquivalenceConstants& ec,
                                    std::uint64_t seed, std::size_t count);

}  // namespace bregkit
