#pragma once

#include "lk/core/interval_set.hpp"

#include <functional>
#include <string>
#include <vector>

namespace lk {

enum class Direction { increasing, decreasing };

std::string to_string(Direction d);

struct NestedFamily {
    std::function<IntervalSet(long)> level;
    Direction direction = Direction::decreasing;
};

// J_n: 2^n closed intervals of length 3^-n.
IntervalSet cantor_level(long n);
NestedFamily cantor_family();

struct LimitReport {
    std::vector<Rat> measures;  // measures[n] = mu(level(n)), n = 0..n_max
    Direction direction = Direction::decreasing;
    bool strict = true;  // every step changed the measure
    Rat last;            // mu(level(n_max)): the tightest bound on the limit
    Rat last_step;       // |mu(level(n_max)) - mu(level(n_max - 1))|
};

// Throws InvariantError (at() == n) when level(n) and level(n + 1) are not
// nested in the declared direction.
LimitReport limit_measure(const NestedFamily& f, long n_max);

struct Cover {
    std::vector<Interval> intervals;  // all open
    Rat total_length;

    static Cover from(std::vector<Interval> intervals);
};

struct NullCover {
    Cover cover;
    long level = 0;    // n*: the level whose components were inflated
    Rat level_measure;
    Rat slack;         // per-side inflation of every component
};

// Finds the least n <= horizon with mu(level(n)) < eps and inflates each of its
// m components by the largest power of two s with 2*m*s <= (eps - mu)/2, so the
// total length is below eps exactly.
NullCover null_cover(const NestedFamily& f, const Rat& eps, long horizon = 200);

struct CoverCheck {
    bool covers = false;
    Rat total;
};

CoverCheck outer_measure_of_cover(const Cover& c, const IntervalSet& a);

struct DensityWitness {
    Interval u;
    Rat ratio;  // mu(A & U) / mu(U)
};

// Leftmost component of maximal length, opened.
DensityWitness density_witness(const IntervalSet& a, const Rat& p);

}  // namespace lk
