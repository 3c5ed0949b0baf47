#pragma once

#include "lk/core/rat.hpp"

#include <stdexcept>

namespace lk {

// Thrown when double interval arithmetic cannot produce a finite enclosure.
struct DIntervalFailure : std::runtime_error {
    DIntervalFailure() : std::runtime_error("double interval enclosure failed") {}
};

// Closed interval of doubles, rounded outward after every operation.
struct DInterval {
    double lo = 0;
    double hi = 0;

    static DInterval point(double v) { return {v, v}; }
    // Smallest enclosing pair of doubles around q; fails if q overflows.
    static DInterval of(const Rat& q);

    double width() const { return hi - lo; }
    bool contains_zero() const { return lo <= 0 && 0 <= hi; }
    bool positive() const { return lo > 0; }
    bool negative() const { return hi < 0; }
};

DInterval operator+(const DInterval& a, const DInterval& b);
DInterval operator-(const DInterval& a, const DInterval& b);
DInterval operator-(const DInterval& a);
DInterval operator*(const DInterval& a, const DInterval& b);
DInterval operator/(const DInterval& a, const DInterval& b);
DInterval hull(const DInterval& a, const DInterval& b);
DInterval dpow(const DInterval& a, long k);
// a^r for a > 0.
DInterval drpow(const DInterval& a, const Rat& r);
DInterval dsqrt(const DInterval& a);
DInterval dsin(const DInterval& a);
DInterval dcos(const DInterval& a);
DInterval dpi();

// Exact rational conversion of the endpoints.
Rat rat_lo(const DInterval& a);
Rat rat_hi(const DInterval& a);

}  // namespace lk
