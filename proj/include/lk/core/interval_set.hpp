#pragma once

#include "lk/core/rat.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace lk {

// A nonempty interval with rational endpoints. lo == hi requires both ends
// closed; an empty interval never appears inside an IntervalSet.
struct Interval {
    Rat lo;
    Rat hi;
    bool lo_closed = true;
    bool hi_closed = true;

    static Interval closed(const Rat& a, const Rat& b) { return {a, b, true, true}; }
    static Interval open(const Rat& a, const Rat& b) { return {a, b, false, false}; }
    static Interval point(const Rat& a) { return {a, a, true, true}; }

    bool empty() const;
    bool is_point() const { return lo == hi; }
    Rat length() const { return hi - lo; }
    bool contains(const Rat& x) const;
    bool contains(const Interval& other) const;

    friend bool operator==(const Interval&, const Interval&) = default;
};

const Interval& unit_interval();

// Canonical finite union of disjoint rational intervals: sorted, pairwise
// disjoint, and no two components can be merged into a single interval.
class IntervalSet {
public:
    IntervalSet() = default;

    const std::vector<Interval>& components() const noexcept { return parts_; }
    std::size_t size() const noexcept { return parts_.size(); }
    bool empty() const noexcept { return parts_.empty(); }

    bool contains(const Rat& x) const;
    // Sorted, deduplicated endpoints of all components.
    std::vector<Rat> endpoints() const;

    friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

    // Trusted constructor: caller guarantees canonical form.
    static IntervalSet from_canonical(std::vector<Interval> parts);

private:
    std::vector<Interval> parts_;
};

// Sorts and merges. Every endpoint must lie in `ambient` (DomainError
// otherwise); pass std::nullopt for an unconstrained line (covers do this).
IntervalSet canonicalize(std::vector<Interval> raw,
                         const std::optional<Interval>& ambient = unit_interval());

Rat measure(const IntervalSet& a);
IntervalSet set_union(const IntervalSet& a, const IntervalSet& b);
IntervalSet intersect(const IntervalSet& a, const IntervalSet& b);
IntervalSet complement(const IntervalSet& a, const Interval& ambient = unit_interval());
IntervalSet difference(const IntervalSet& a, const IntervalSet& b,
                       const Interval& ambient = unit_interval());
IntervalSet translate(const IntervalSet& a, const Rat& c,
                      const Interval& ambient = unit_interval());
bool is_subset(const IntervalSet& a, const IntervalSet& b);
IntervalSet from_interval(const Interval& i);

std::string to_string(const Interval& i);
std::string to_string(const IntervalSet& s);

// JSON: ordered array of {"lo","hi","lo_closed","hi_closed"} with "p/q" strings.
nlohmann::json to_json(const IntervalSet& s);
IntervalSet interval_set_from_json(const nlohmann::json& j,
                                   const std::optional<Interval>& ambient = unit_interval());

}  // namespace lk
