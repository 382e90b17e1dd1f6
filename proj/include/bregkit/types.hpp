#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace bregkit {

// Dense point in R^n. Entries must be finite; dimension is validated against
// the enclosing EntropySpec at every operation entry point.
using Vector = std::vector<double>;

inline bool all_finite(const Vector& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

// Value in (-inf, +inf]. Finite payloads are never NaN.
class ExtendedReal {
public:
    ExtendedReal() : value_(0.0) {}
    static ExtendedReal finite(double v) {
        if (std::isnan(v)) throw std::invalid_argument("ExtendedReal: NaN");
        ExtendedReal r;
        r.value_ = v;
        return r;
    }
    static ExtendedReal pos_infinity() {
        ExtendedReal r;
        r.value_ = std::numeric_limits<double>::infinity();
        return r;
    }

    bool is_finite() const { return std::isfinite(value_); }
    bool is_infinite() const { return std::isinf(value_); }

    // Finite payload; throws on +inf.
    double value() const {
        if (!is_finite()) throw std::logic_error("ExtendedReal: value() on +inf");
        return value_;
    }
    // +inf maps to the IEEE infinity, which is what the report writers expect.
    double as_double() const { return value_; }

    friend bool operator==(const ExtendedReal& a, const ExtendedReal& b) {
        return a.value_ == b.value_;
    }

private:
    double value_;
};

enum class DomainStatus {
    Interior,          // b finite, b' defined
    BoundaryInDomain,  // b finite, b' undefined (e.g. BGS at a zero coordinate)
    OutsideDomain,     // b = +inf
};

inline const char* to_string(DomainStatus s) {
    switch (s) {
        case DomainStatus::Interior: return "interior";
        case DomainStatus::BoundaryInDomain: return "boundary";
        case DomainStatus::OutsideDomain: return "outside";
    }
    return "?";
}

// ---- error taxonomy ----

struct BregkitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : BregkitError {
    using BregkitError::BregkitError;
};
struct NotInInterior : BregkitError {
    using BregkitError::BregkitError;
};
struct NotInZone : BregkitError {
    using BregkitError::BregkitError;
};
struct NonpositiveLambda : BregkitError {
    using BregkitError::BregkitError;
};
struct SemiEquivalenceViolated : BregkitError {
    using BregkitError::BregkitError;
};
struct OverflowError : BregkitError {
    using BregkitError::BregkitError;
};
struct NoDocumentedParameter : BregkitError {
    using BregkitError::BregkitError;
};
struct NoDocumentedGauge : BregkitError {
    using BregkitError::BregkitError;
};
struct SOutOfRange : BregkitError {
    using BregkitError::BregkitError;
};
struct QOutOfRange : BregkitError {
    using BregkitError::BregkitError;
};
struct GammaTooSmall : BregkitError {
    using BregkitError::BregkitError;
};
struct SegmentLeavesDomain : BregkitError {
    using BregkitError::BregkitError;
};
struct SequenceLeavesZone : BregkitError {
    using BregkitError::BregkitError;
};
struct EmptyPair : BregkitError {
    using BregkitError::BregkitError;
};
struct NotEssentiallySmooth : BregkitError {
    using BregkitError::BregkitError;
};
struct InvalidSpec : BregkitError {
    using BregkitError::BregkitError;
};

inline void require_dim(const Vector& v, std::size_t dim, const char* what) {
    if (v.size() != dim)
        throw DimensionMismatch(std::string(what) + ": expected dimension " +
                                std::to_string(dim) + ", got " + std::to_string(v.size()));
}

}  // namespace bregkit
