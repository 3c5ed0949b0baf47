#pragma once

#include "lk/core/enclosure.hpp"
#include "lk/core/interval_set.hpp"
#include "lk/expr/ast.hpp"

#include <string>
#include <vector>

namespace lk {

struct SimplePart {
    IntervalSet set;
    Rat value;
};

// sum r_i * chi(A_i) over a finite measurable partition {A_i} of the ambient
// interval. Empty parts are dropped on construction.
class SimpleFunction {
public:
    // Throws PreconditionError unless the sets are pairwise disjoint and
    // their union is the ambient interval.
    explicit SimpleFunction(std::vector<SimplePart> parts, const Interval& ambient = unit_interval());

    static SimpleFunction constant(const Rat& c, const Interval& ambient = unit_interval());
    // chi(A) = 1 on A, 0 on its complement.
    static SimpleFunction indicator(const IntervalSet& a, const Interval& ambient = unit_interval());

    const std::vector<SimplePart>& parts() const noexcept { return parts_; }
    const Interval& ambient() const noexcept { return ambient_; }
    const Rat& value_at(const Rat& x) const;

    // The same function as an expression (piecewise over the parts).
    FuncExpr to_expr() const;

private:
    std::vector<SimplePart> parts_;
    Interval ambient_;
};

// Common refinement {A_i cap B_j} with values combined by op.
SimpleFunction simple_add(const SimpleFunction& s, const SimpleFunction& t);
SimpleFunction simple_mul(const SimpleFunction& s, const SimpleFunction& t);
SimpleFunction simple_scale(const Rat& c, const SimpleFunction& s);
SimpleFunction simple_abs(const SimpleFunction& s);
// s <= t at every point.
bool simple_le(const SimpleFunction& s, const SimpleFunction& t);

std::string to_string(const SimpleFunction& s);

// Finite measures on the ambient interval.
class Measure {
public:
    enum class Kind { lebesgue, dirac, density };

    static Measure lebesgue();
    static Measure dirac(const Rat& x0);
    // Throws PreconditionError unless f is certified nonnegative on every
    // cell of a dyadic verification partition of the ambient interval.
    static Measure density(const FuncExpr& f, const Interval& ambient = unit_interval());

    Kind kind() const noexcept { return kind_; }
    const Rat& point() const noexcept { return x0_; }
    const FuncExpr& density_function() const noexcept { return f_; }

private:
    Kind kind_ = Kind::lebesgue;
    Rat x0_;
    FuncExpr f_;
};

std::string to_string(const Measure& m);

}  // namespace lk
