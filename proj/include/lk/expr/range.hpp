#pragma once

#include "lk/core/enclosure.hpp"
#include "lk/core/interval_set.hpp"
#include "lk/expr/ast.hpp"

#include <optional>
#include <string>

namespace lk {

// Extended-real bounds on the range of an expression over an interval.
// `lo_attained` / `hi_attained` are set only when the bound is certainly the
// exact minimum / maximum over the queried interval. `partial` records that
// some points of the interval hit an undefined form and were excluded.
struct RangeEnclosure {
    ExtRat lo;
    ExtRat hi;
    bool lo_attained = false;
    bool hi_attained = false;
    bool partial = false;

    bool bounded() const { return lo.finite() && hi.finite(); }
    bool is_point() const { return bounded() && lo == hi; }
    // Precondition: bounded().
    Enclosure finite() const;
    // hi - lo (Precondition: bounded()).
    Rat width() const;
    bool contains(const ExtRat& v) const { return lo <= v && v <= hi; }
};

std::string to_string(const RangeEnclosure& r);

struct EvalOptions {
    // Evaluate dirichlet(a, b) as b even at rational points: the value of the
    // function at an irrational point approximated by the query.
    bool generic_point = false;
};

// Throws EvalError when the expression is undefined on all of J.
RangeEnclosure range_enclosure(const FuncExpr& f, const Interval& j, const EvalOptions& opts = {});

// Pointwise value. Rational-valued results come back exact (lo == hi); results
// involving pi, sin, cos, sqrt or rational powers are bracketed within ~2^-90.
// Division by zero yields +-inf by sign; 0/0, inf-inf and roots of negative
// numbers throw EvalError.
RangeEnclosure eval_func(const FuncExpr& f, const Rat& x, const EvalOptions& opts = {});

// Almost-everywhere canonical form: dirichlet(a,b) -> b, indicators of null
// sets -> 0, of sets of full measure -> 1, null piecewise branches dropped.
FuncExpr ae_canonicalize(const FuncExpr& f, const Interval& ambient = unit_interval());

}  // namespace lk
