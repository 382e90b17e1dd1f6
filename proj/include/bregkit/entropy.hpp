#pragma once

#include <memory>
#include <utility>
#include <variant>
#include <vector>

#include "bregkit/norms.hpp"
#include "bregkit/types.hpp"

namespace bregkit {

class EntropySpec;
using EntropyPtr = std::shared_ptr<const EntropySpec>;

// ---- catalog bases ----

struct Bgs {};  // sum x log x on the closed positive orthant, 0 log 0 := 0

struct Hct {  // (1/(q-1)) sum (x^q - 1), q in (0,1) u (1,inf); 1/(1-q) variant for q < 0
    double q;
};

struct Burg {};  // -sum log x on the open positive orthant

struct IteratedLog {};  // -sum log(log(x)) on (1,inf)^n

struct BetaEntropy {  // beta-parameterized family; beta=1 is BGS-like, beta=0 is Burg-like
    double beta;
};

struct AlphaBeta {  // sum (x^alpha - x^beta), alpha >= 1, beta in (0,1)
    double alpha;
    double beta;
};

struct L2Lp {  // 0.5 * ||x||_p^2, p in (1,2]
    double p;
};

struct QuadraticEntropy {  // 0.5 <Ax, x>, A symmetric positive definite (row-major)
    std::vector<double> a;
};

struct Ell2Type {  // sum of e^{(x_{2i-1}+x_{2i})^2} + e^{(x_{2i-1}-x_{2i})^2} - 2 over pairs
    std::size_t n_split;  // number of pairs measured with the l1 block norm
    std::size_t pairs;    // truncation; dim = 2 * pairs
};

// ---- combinator wrappers ----

struct Scaled {
    double lambda;
    EntropyPtr inner;
};

struct PlusLinear {
    Vector ell;
    EntropyPtr inner;
};

struct SumOf {  // positive weights; members share dim and norm
    std::vector<std::pair<double, EntropyPtr>> terms;
};

struct Translated {  // b~(x) = b(x + z0); zone shifts by -z0
    Vector z0;
    EntropyPtr inner;
};

struct DirectSumOf {  // blockwise sum; c is the semi-equivalence constant of the total norm
    std::vector<EntropyPtr> blocks;
    double c;
};

using EntropyNode = std::variant<Bgs, Hct, Burg, IteratedLog, BetaEntropy, AlphaBeta, L2Lp,
                                 QuadraticEntropy, Ell2Type, Scaled, PlusLinear, SumOf,
                                 Translated, DirectSumOf>;

// Immutable description of a Bregman function: a catalog base (possibly under
// combinator wrappers), the ambient dimension, and the ambient norm. All
// evaluation goes through the free functions in core.hpp.
class EntropySpec {
public:
    EntropySpec(EntropyNode node, std::size_t dim, NormSpec norm);

    const EntropyNode& node() const { return node_; }
    std::size_t dim() const { return dim_; }
    const NormSpec& norm() const { return norm_; }

    std::string describe() const;

private:
    EntropyNode node_;
    std::size_t dim_;
    NormSpec norm_;
};

// ---- factories (parameter validation lives here) ----

EntropyPtr make_bgs(std::size_t dim, NormSpec norm);
EntropyPtr make_hct(double q, std::size_t dim, NormSpec norm);
EntropyPtr make_burg(std::size_t dim, NormSpec norm);
EntropyPtr make_iterated_log(std::size_t dim, NormSpec norm);
EntropyPtr make_beta(double beta, std::size_t dim, NormSpec norm);
EntropyPtr make_alpha_beta(double alpha, double beta, std::size_t dim, NormSpec norm);
EntropyPtr make_l2lp(double p, std::size_t dim, NormSpec norm);
// A is symmetrized as (A + A^T)/2; positivity of the sampled Rayleigh quotient
// over unit vectors is required at construction.
EntropyPtr make_quadratic(std::vector<double> a, std::size_t dim, NormSpec norm);
// Canonical norm is mixed_l1_l2(2 * n_split, 2 * pairs).
EntropyPtr make_ell2_type(std::size_t n_split, std::size_t pairs);
EntropyPtr make_ell2_type(std::size_t n_split, std::size_t pairs, NormSpec norm);

}  // namespace bregkit
