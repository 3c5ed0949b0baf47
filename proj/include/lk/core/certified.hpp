#pragma once

#include "lk/core/rat.hpp"

namespace lk {

// Working precision (bits) for transcendental bounds. Bounds are computed
// with directed rounding, so every returned pair brackets the true value and
// the gap is below 2^-90 relative per evaluation.
inline constexpr long kCertifiedPrecision = 96;

struct RatBounds {
    Rat lo;
    Rat hi;
};

const RatBounds& pi_bounds();

// sqrt(x) for x >= 0; exact (lo == hi) when x is the square of a rational.
RatBounds sqrt_bounds(const Rat& x);

// x^r for x > 0 and rational r; exact when the root is rational.
RatBounds rpow_bounds(const Rat& x, const Rat& r);

// Range of sin / cos over the interval with endpoints a <= b. The result is
// inclusion-isotone: shrinking [a,b] never enlarges the returned bounds.
// `lo_attained` / `hi_attained` are set only when an interior (or included)
// extremum certifies that the bound is the true minimum / maximum.
struct TrigRange {
    Rat lo;
    Rat hi;
    bool lo_attained = false;
    bool hi_attained = false;
};

TrigRange sin_range(const Rat& a, const Rat& b, bool a_closed = true, bool b_closed = true);
TrigRange cos_range(const Rat& a, const Rat& b, bool a_closed = true, bool b_closed = true);

}  // namespace lk
