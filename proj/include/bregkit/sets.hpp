#pragma once

#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "bregkit/types.hpp"

namespace bregkit {

// Sample-able region descriptors used by pair domains, certificates and probes.

struct SingletonSet {
    Vector point;
};

struct BoxSet {  // axis-aligned, closed
    Vector lo;
    Vector hi;
};

// { w in dom(b) : ||w|| <= radius } (ambient norm), optionally with a
// coordinate floor w_k >= floor_eps.
struct NormBallInDomain {
    double radius;
    std::optional<double> floor_eps;
};

// zone(b) intersected with { w : ||w|| > r }; sampling draws radii
// log-uniformly from (r, r_cap].
struct ZoneAnnulus {
    double r;
    double r_cap;
};

struct SetDescriptor;

struct ProductSet {  // blockwise product, matching a DirectSumOf layout
    std::vector<std::shared_ptr<const SetDescriptor>> factors;
};

struct SetDescriptor {
    std::variant<SingletonSet, BoxSet, NormBallInDomain, ZoneAnnulus, ProductSet> region;
};

inline SetDescriptor singleton_set(Vector x) { return SetDescriptor{SingletonSet{std::move(x)}}; }
inline SetDescriptor box_set(Vector lo, Vector hi) {
    return SetDescriptor{BoxSet{std::move(lo), std::move(hi)}};
}
inline SetDescriptor ball_in_domain(double radius, std::optional<double> floor_eps = {}) {
    return SetDescriptor{NormBallInDomain{radius, floor_eps}};
}
inline SetDescriptor zone_annulus(double r, double r_cap) {
    return SetDescriptor{ZoneAnnulus{r, r_cap}};
}

std::string describe(const SetDescriptor& set);

}  // namespace bregkit
