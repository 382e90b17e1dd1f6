#pragma once

#include "bregkit/entropy.hpp"

namespace bregkit {

// Domain classification against the entropy's effective domain and zone.
DomainStatus classify(const EntropySpec& spec, const Vector& x);

// b(x); +inf exactly when classify(spec, x) == OutsideDomain.
ExtendedReal value(const EntropySpec& spec, const Vector& x);

// b'(x) in matrix/vector form. Requires classify(spec, x) == Interior.
Vector grad(const EntropySpec& spec, const Vector& x);

// b''(x)(w, w). Requires classify(spec, x) == Interior. May return +inf at
// curvature singularities (e.g. L2Lp with a zero coordinate and p < 2).
double hessian_quadform(const EntropySpec& spec, const Vector& x, const Vector& w);

// B(x, y) = b(x) - b(y) - <b'(y), x - y> computed strictly from value and
// grad; +inf when x is outside dom(b) or y is outside the zone. B(x, x) = 0
// exactly (bitwise equality fast path).
ExtendedReal divergence_generic(const EntropySpec& spec, const Vector& x, const Vector& y);

// Closed-form divergence with bit-for-bit the same domain rules. Agreement
// with divergence_generic is the module's central oracle invariant.
ExtendedReal divergence_closed(const EntropySpec& spec, const Vector& x, const Vector& y);

// B(x,z) - B(x,y) - B(y,z) - <b'(y) - b'(z), x - y>; zero in exact arithmetic.
double three_point_residual(const EntropySpec& spec, const Vector& x, const Vector& y,
                            const Vector& z);

// lambda * b + <ell, .>; divergences scale by lambda, zone unchanged.
EntropyPtr scale_plus_linear(const EntropyPtr& spec, double lambda, const Vector& ell);

// Positively weighted sum of entropies sharing dim and norm.
EntropyPtr sum_of(const std::vector<std::pair<double, EntropyPtr>>& terms);

// b~(x) = b(x + z0); zone becomes zone - z0 and B~(x, y) = B(x + z0, y + z0).
EntropyPtr translate(const EntropyPtr& spec, const Vector& z0);

// Blockwise direct sum under a total norm semi-equivalent to the l2 combination
// of the block norms: sqrt(sum_i ||x_i||_i^2) >= c ||x||. The inequality is
// sample-verified at construction.
EntropyPtr direct_sum(const std::vector<EntropyPtr>& blocks, double c, NormSpec total_norm);

ExtendedReal divergence_generic(const EntropyPtr& spec, const Vector& x, const Vector& y);
ExtendedReal divergence_closed(const EntropyPtr& spec, const Vector& x, const Vector& y);

}  // namespace bregkit
