#include "lk/lebesgue/dinterval.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cmath>
#include <limits>

namespace lk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Next representable double toward +inf / -inf; infinities and NaN pass through.
inline double up(double x) {
    if (!(x < kInf)) return x;
    if (x == 0) return std::numeric_limits<double>::denorm_min();
    auto bits = std::bit_cast<std::uint64_t>(x);
    bits += x > 0 ? 1 : -1;
    return std::bit_cast<double>(bits);
}

inline double down(double x) { return -up(-x); }

// Outward by n ulps; libm transcendental results are within 1 ulp.
double down(double x, int n) {
    for (int i = 0; i < n; ++i) x = down(x);
    return x;
}
double up(double x, int n) {
    for (int i = 0; i < n; ++i) x = up(x);
    return x;
}

DInterval checked(double lo, double hi) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi) throw DIntervalFailure();
    return {lo, hi};
}

// Rounded-to-nearest result r of an exact operation is within half an ulp.
DInterval widen(double lo, double hi) { return checked(down(lo), up(hi)); }

}  // namespace

DInterval DInterval::of(const Rat& q) {
    double d = q.get_d();  // truncated toward zero
    if (!std::isfinite(d)) throw DIntervalFailure();
    int c = cmp(Rat(d), q);
    if (c == 0) return {d, d};
    if (c < 0) return checked(d, up(d));
    return checked(down(d), d);
}

DInterval operator+(const DInterval& a, const DInterval& b) { return widen(a.lo + b.lo, a.hi + b.hi); }
DInterval operator-(const DInterval& a, const DInterval& b) { return widen(a.lo - b.hi, a.hi - b.lo); }
DInterval operator-(const DInterval& a) { return {-a.hi, -a.lo}; }

DInterval operator*(const DInterval& a, const DInterval& b) {
    if ((a.lo == 0 && a.hi == 0) || (b.lo == 0 && b.hi == 0)) return {0, 0};
    double p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
    return widen(*std::min_element(p, p + 4), *std::max_element(p, p + 4));
}

DInterval operator/(const DInterval& a, const DInterval& b) {
    if (b.contains_zero()) throw DIntervalFailure();
    double p[4] = {a.lo / b.lo, a.lo / b.hi, a.hi / b.lo, a.hi / b.hi};
    return widen(*std::min_element(p, p + 4), *std::max_element(p, p + 4));
}

DInterval hull(const DInterval& a, const DInterval& b) { return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)}; }

DInterval dpow(const DInterval& a, long k) {
    auto power = [](DInterval base, long e) {
        DInterval r{1, 1};
        while (e > 0) {
            if (e & 1) r = r * base;
            e >>= 1;
            if (e > 0) base = base * base;
        }
        return r;
    };
    if (k % 2 != 0) return power(a, k);
    // Even powers: monotone in |x|, minimum at the point nearest 0.
    double m = a.contains_zero() ? 0 : std::min(std::fabs(a.lo), std::fabs(a.hi));
    double M = std::max(std::fabs(a.lo), std::fabs(a.hi));
    return {power({m, m}, k).lo, power({M, M}, k).hi};
}

DInterval drpow(const DInterval& a, const Rat& r) {
    if (!(a.lo > 0)) throw DIntervalFailure();
    double ad = to_double(r);
    // The exponent is inexact in double; widen by the induced relative error.
    auto eval = [&](double x, bool upper) {
        double v = std::pow(x, ad);
        double rel = 8 * std::numeric_limits<double>::epsilon() * (1 + std::fabs(std::log(x) * ad));
        return upper ? up(v * (1 + rel), 2) : down(v * (1 - rel), 2);
    };
    if (sgn(r) >= 0) return checked(eval(a.lo, false), eval(a.hi, true));
    return checked(eval(a.hi, false), eval(a.lo, true));
}

DInterval dsqrt(const DInterval& a) {
    if (a.lo < 0) throw DIntervalFailure();
    return checked(std::max(0.0, down(std::sqrt(a.lo))), up(std::sqrt(a.hi)));
}

namespace {

// Range of sin (h = 1/2) or cos (h = 0) over a, via the critical points (j + h) pi.
DInterval trig_range(const DInterval& a, bool is_cos) {
    if (a.hi - a.lo >= 7) return {-1, 1};
    double h = is_cos ? 0.0 : 0.5;
    auto f = [&](double x) { return is_cos ? std::cos(x) : std::sin(x); };
    double fa = f(a.lo), fb = f(a.hi);
    double lo = std::max(-1.0, down(std::min(fa, fb), 2));
    double hi = std::min(1.0, up(std::max(fa, fb), 2));
    double margin = 1e-12 * (1 + std::max(std::fabs(a.lo), std::fabs(a.hi)));
    double j0 = std::floor((a.lo - margin) / M_PI - h) - 1;
    double j1 = std::ceil((a.hi + margin) / M_PI - h) + 1;
    for (double j = j0; j <= j1; ++j) {
        double c = (j + h) * M_PI;
        if (c < a.lo - margin || c > a.hi + margin) continue;
        if (std::fmod(std::fabs(j), 2.0) == 0)
            hi = 1;
        else
            lo = -1;
    }
    return checked(lo, hi);
}

}  // namespace

DInterval dsin(const DInterval& a) { return trig_range(a, false); }
DInterval dcos(const DInterval& a) { return trig_range(a, true); }

DInterval dpi() { return {M_PI, up(M_PI)}; }

Rat rat_lo(const DInterval& a) { return Rat(a.lo); }
Rat rat_hi(const DInterval& a) { return Rat(a.hi); }

}  // namespace lk
