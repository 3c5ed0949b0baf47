#include "lk/riemann/step.hpp"

#include "lk/core/errors.hpp"

#include <algorithm>

namespace lk {

StepFunction::StepFunction(std::vector<Rat> breakpoints, std::vector<Rat> values)
    : x_(std::move(breakpoints)), c_(std::move(values)) {
    if (x_.size() < 2 || c_.size() + 1 != x_.size())
        throw PreconditionError("a step function needs n+1 breakpoints for n values");
    for (std::size_t i = 1; i < x_.size(); ++i)
        if (!(x_[i - 1] < x_[i])) throw PreconditionError("breakpoints must strictly increase");
}

StepFunction StepFunction::constant(const Rat& c, const Rat& a, const Rat& b) {
    return StepFunction({a, b}, {c});
}

const Rat& StepFunction::value_at(const Rat& x) const {
    if (x < lo() || x > hi()) throw DomainError("point " + to_string(x) + " outside the domain");
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t cell = static_cast<std::size_t>(it - x_.begin());
    if (cell == 0) cell = 1;
    if (cell > c_.size()) cell = c_.size();
    return c_[cell - 1];
}

Rat step_integral(const StepFunction& s, const Rat& a, const Rat& b) {
    if (b < a) return -step_integral(s, b, a);
    if (a < s.lo() || b > s.hi())
        throw DomainError("integration bounds outside the step function's domain");
    const auto& x = s.breakpoints();
    const auto& c = s.values();
    Rat total = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        Rat lo = max(x[i], a), hi = min(x[i + 1], b);
        if (lo < hi) total += c[i] * (hi - lo);
    }
    return total;
}

Rat step_integral(const StepFunction& s) { return step_integral(s, s.lo(), s.hi()); }

std::pair<StepFunction, StepFunction> refine_common(const StepFunction& s, const StepFunction& t) {
    if (s.lo() != t.lo() || s.hi() != t.hi())
        throw PreconditionError("step functions have different domains");
    std::vector<Rat> xs;
    std::merge(s.breakpoints().begin(), s.breakpoints().end(), t.breakpoints().begin(),
               t.breakpoints().end(), std::back_inserter(xs));
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::vector<Rat> cs, ct;
    cs.reserve(xs.size() - 1);
    ct.reserve(xs.size() - 1);
    std::size_t i = 0, j = 0;
    for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
        while (s.breakpoints()[i + 1] <= xs[k]) ++i;
        while (t.breakpoints()[j + 1] <= xs[k]) ++j;
        cs.push_back(s.values()[i]);
        ct.push_back(t.values()[j]);
    }
    return {StepFunction(xs, std::move(cs)), StepFunction(xs, std::move(ct))};
}

StepFunction step_add(const StepFunction& s, const StepFunction& t) {
    auto [a, b] = refine_common(s, t);
    std::vector<Rat> c(a.values().size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.values()[i] + b.values()[i];
    return StepFunction(a.breakpoints(), std::move(c));
}

StepFunction step_scale(const Rat& k, const StepFunction& s) {
    std::vector<Rat> c(s.values().size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = k * s.values()[i];
    return StepFunction(s.breakpoints(), std::move(c));
}

StepFunction step_abs(const StepFunction& s) {
    std::vector<Rat> c(s.values().size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = abs(s.values()[i]);
    return StepFunction(s.breakpoints(), std::move(c));
}

bool step_le(const StepFunction& s, const StepFunction& t) {
    auto [a, b] = refine_common(s, t);
    for (std::size_t i = 0; i < a.values().size(); ++i)
        if (a.values()[i] > b.values()[i]) return false;
    return true;
}

std::string to_string(const StepFunction& s) {
    std::string out;
    for (std::size_t i = 0; i < s.cells(); ++i) {
        if (i > 0) out += ", ";
        out += "(" + to_string(s.breakpoints()[i]) + "," + to_string(s.breakpoints()[i + 1]) +
               "):" + to_string(s.values()[i]);
    }
    return out;
}

}  // namespace lk
