#pragma once

#include "bregkit/analysis.hpp"

namespace bregkit {

// A catalog instance with sampling boxes: `interior_box` stays inside the
// zone; `safe_box` additionally keeps a margin from the boundary (and from
// curvature singularities) for finite-difference work.
struct CatalogEntry {
    std::string name;
    EntropyPtr spec;
    BoxSet interior_box;
    BoxSet safe_box;
};

// The nine base families at their standard parameter choices. `dim` applies
// to the resizable families; Ell2Type entries use dim = 2 * pairs.
std::vector<CatalogEntry> standard_catalog(std::size_t dim, std::uint64_t seed,
                                           std::size_t ell2_pairs = 8);

// Single catalog entry by CLI name (bgs, hct, burg, iterlog, beta, alphabeta,
// l2lp, quadratic, ell2) with explicit parameters.
CatalogEntry catalog_entry(const std::string& name, std::size_t dim, const NormSpec& norm,
                           std::optional<double> q = {}, std::optional<double> beta = {},
                           std::optional<double> alpha = {}, std::optional<double> p = {},
                           std::size_t ell2_split = 0, std::size_t ell2_pairs = 0,
                           std::uint64_t seed = 42);

// |closed - generic| <= tol * max(1, |B|) on random interior pairs.
ProbeReport oracle_agreement_probe(const CatalogEntry& e, const Sampler& sampler,
                                   double tol = 1e-10);

// B >= -1e-12 everywhere; B(x,x) = 0 exactly; B > pos_floor once
// ||x - y||_2 >= separation.
ProbeReport nonnegativity_probe(const CatalogEntry& e, const Sampler& sampler,
                                double separation = 1e-4, double pos_floor = 1e-14);

// Central finite differences of value against grad; h = max(1e-6, 1e-6|x_k|).
ProbeReport fd_gradient_probe(const CatalogEntry& e, const Sampler& sampler, double tol = 1e-5);

// Directional finite differences of grad against hessian_quadform.
ProbeReport fd_hessian_probe(const CatalogEntry& e, const Sampler& sampler, double tol = 1e-4);

ProbeReport three_point_probe(const CatalogEntry& e, const Sampler& sampler, double tol = 1e-10);

// B_{lambda f + ell} = lambda B_f, independent of ell.
ProbeReport scaling_combinator_probe(const CatalogEntry& e, const Sampler& sampler,
                                     double tol = 1e-12);

// B~(x, y) bit-equals B(x + z0, y + z0).
ProbeReport translation_combinator_probe(const CatalogEntry& e, const Sampler& sampler);

// SumOf satisfies B = sum_k lambda_k B_k.
ProbeReport sum_combinator_probe(const CatalogEntry& a, const CatalogEntry& b,
                                 const Sampler& sampler, double tol = 1e-10);

}  // namespace bregkit
