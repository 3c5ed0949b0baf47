#pragma once

#include "lk/core/rat.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace lk {

// Certified rational bounds [lo, hi] on a real quantity.
struct Enclosure {
    Rat lo;
    Rat hi;

    static Enclosure exact(const Rat& v) { return {v, v}; }

    Rat width() const { return hi - lo; }
    Rat mid() const { return midpoint(lo, hi); }
    bool contains(const Rat& v) const { return lo <= v && v <= hi; }
    bool contains(const Enclosure& o) const { return lo <= o.lo && o.hi <= hi; }
    bool intersects(const Enclosure& o) const { return !(hi < o.lo || o.hi < lo); }
    bool is_exact() const { return lo == hi; }

    friend bool operator==(const Enclosure&, const Enclosure&) = default;
};

Enclosure operator+(const Enclosure& a, const Enclosure& b);
Enclosure operator-(const Enclosure& a, const Enclosure& b);
Enclosure operator-(const Enclosure& a);
Enclosure operator*(const Enclosure& a, const Enclosure& b);
Enclosure operator*(const Rat& c, const Enclosure& a);
Enclosure hull(const Enclosure& a, const Enclosure& b);
Enclosure square(const Enclosure& a);
// max(|lo|, |hi|)
Rat magnitude(const Enclosure& a);
// Outward-rounded square root; the lower end is clamped at 0.
Enclosure sqrt(const Enclosure& a);

std::string to_string(const Enclosure& e);
nlohmann::json to_json(const Enclosure& e);

}  // namespace lk
