#pragma once

#include "lk/core/rat.hpp"

#include <string>
#include <utility>
#include <vector>

namespace lk {

// Constant on each open cell (x_{i-1}, x_i); values at breakpoints are
// unspecified and never influence an integral.
class StepFunction {
public:
    StepFunction() = default;
    // Throws PreconditionError unless breakpoints strictly increase and
    // values.size() + 1 == breakpoints.size().
    StepFunction(std::vector<Rat> breakpoints, std::vector<Rat> values);

    static StepFunction constant(const Rat& c, const Rat& a = 0, const Rat& b = 1);

    const std::vector<Rat>& breakpoints() const noexcept { return x_; }
    const std::vector<Rat>& values() const noexcept { return c_; }
    std::size_t cells() const noexcept { return c_.size(); }
    const Rat& lo() const { return x_.front(); }
    const Rat& hi() const { return x_.back(); }

    // Value on the cell containing x; at a breakpoint, the cell to its right
    // (the last cell for the right end).
    const Rat& value_at(const Rat& x) const;

    friend bool operator==(const StepFunction&, const StepFunction&) = default;

private:
    std::vector<Rat> x_;
    std::vector<Rat> c_;
};

// Sum of c_i times the length of (x_{i-1}, x_i) intersected with [a, b];
// for a > b the result is -step_integral(s, b, a).
Rat step_integral(const StepFunction& s, const Rat& a, const Rat& b);
Rat step_integral(const StepFunction& s);

// Both functions restated on the union of their partitions.
std::pair<StepFunction, StepFunction> refine_common(const StepFunction& s, const StepFunction& t);

StepFunction step_add(const StepFunction& s, const StepFunction& t);
StepFunction step_scale(const Rat& c, const StepFunction& s);
StepFunction step_abs(const StepFunction& s);
// s <= t on every open cell of the common refinement.
bool step_le(const StepFunction& s, const StepFunction& t);

std::string to_string(const StepFunction& s);

}  // namespace lk
