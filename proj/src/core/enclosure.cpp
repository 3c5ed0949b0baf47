#include "lk/core/enclosure.hpp"

#include "lk/core/certified.hpp"

namespace lk {

Enclosure operator+(const Enclosure& a, const Enclosure& b) { return {a.lo + b.lo, a.hi + b.hi}; }
Enclosure operator-(const Enclosure& a, const Enclosure& b) { return {a.lo - b.hi, a.hi - b.lo}; }
Enclosure operator-(const Enclosure& a) { return {-a.hi, -a.lo}; }

Enclosure operator*(const Enclosure& a, const Enclosure& b) {
    Rat p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
    return {min(min(p1, p2), min(p3, p4)), max(max(p1, p2), max(p3, p4))};
}

Enclosure operator*(const Rat& c, const Enclosure& a) {
    if (sgn(c) >= 0) return {c * a.lo, c * a.hi};
    return {c * a.hi, c * a.lo};
}

Enclosure hull(const Enclosure& a, const Enclosure& b) { return {min(a.lo, b.lo), max(a.hi, b.hi)}; }

Enclosure square(const Enclosure& a) {
    Rat l2 = a.lo * a.lo, h2 = a.hi * a.hi;
    if (sgn(a.lo) >= 0) return {l2, h2};
    if (sgn(a.hi) <= 0) return {h2, l2};
    return {Rat(0), max(l2, h2)};
}

Rat magnitude(const Enclosure& a) { return max(abs(a.lo), abs(a.hi)); }

Enclosure sqrt(const Enclosure& a) {
    Rat lo = sgn(a.lo) > 0 ? sqrt_bounds(a.lo).lo : Rat(0);
    Rat hi = sgn(a.hi) > 0 ? sqrt_bounds(a.hi).hi : Rat(0);
    return {lo, hi};
}

std::string to_string(const Enclosure& e) { return "[" + to_string(e.lo) + ", " + to_string(e.hi) + "]"; }

nlohmann::json to_json(const Enclosure& e) { return {{"lo", to_string(e.lo)}, {"hi", to_string(e.hi)}}; }

}  // namespace lk
