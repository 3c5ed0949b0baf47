#include "lk/lebesgue/simple.hpp"

#include "lk/core/errors.hpp"
#include "lk/lebesgue/integral.hpp"

#include <map>

namespace lk {

namespace {

// Parts with equal values are merged; empty parts dropped.
std::vector<SimplePart> normalize(std::vector<SimplePart> parts) {
    std::map<Rat, IntervalSet> by_value;
    for (auto& p : parts) {
        if (p.set.empty()) continue;
        auto it = by_value.find(p.value);
        if (it == by_value.end())
            by_value.emplace(p.value, std::move(p.set));
        else
            it->second = set_union(it->second, p.set);
    }
    std::vector<SimplePart> out;
    for (auto& [v, s] : by_value) out.push_back({std::move(s), v});
    return out;
}

SetExpr set_expr_of(const IntervalSet& s, const Interval& ambient) {
    if (s.empty()) return set::empty();
    SetExpr e;
    for (const auto& c : s.components()) {
        SetExpr lit = set::literal(c, ambient);
        e = e ? set::unite(e, lit) : lit;
    }
    return e;
}

}  // namespace

SimpleFunction::SimpleFunction(std::vector<SimplePart> parts, const Interval& ambient) : ambient_(ambient) {
    IntervalSet whole = from_interval(ambient);
    IntervalSet covered;
    std::vector<SimplePart> kept;
    for (auto& p : parts) {
        if (p.set.empty()) continue;
        if (!is_subset(p.set, whole)) throw PreconditionError("part " + to_string(p.set) + " leaves the ambient interval");
        if (!intersect(covered, p.set).empty()) throw PreconditionError("simple function parts overlap");
        covered = set_union(covered, p.set);
        kept.push_back(std::move(p));
    }
    if (!(covered == whole)) throw PreconditionError("simple function parts do not cover " + to_string(ambient));
    parts_ = normalize(std::move(kept));
}

SimpleFunction SimpleFunction::constant(const Rat& c, const Interval& ambient) {
    return SimpleFunction({{from_interval(ambient), c}}, ambient);
}

SimpleFunction SimpleFunction::indicator(const IntervalSet& a, const Interval& ambient) {
    return SimpleFunction({{a, 1}, {complement(a, ambient), 0}}, ambient);
}

const Rat& SimpleFunction::value_at(const Rat& x) const {
    if (!ambient_.contains(x)) throw DomainError(to_string(x) + " is outside " + to_string(ambient_));
    for (const auto& p : parts_)
        if (p.set.contains(x)) return p.value;
    throw InvariantError("no part contains " + to_string(x));
}

FuncExpr SimpleFunction::to_expr() const {
    std::vector<Branch> branches;
    for (const auto& p : parts_)
        if (sgn(p.value) != 0) branches.push_back({set_expr_of(p.set, ambient_), fx::constant(p.value)});
    if (branches.empty()) return fx::constant(0);
    return fx::piecewise(std::move(branches));
}

namespace {

template <typename Op>
SimpleFunction combine(const SimpleFunction& s, const SimpleFunction& t, Op op) {
    if (!(s.ambient() == t.ambient())) throw PreconditionError("simple functions live on different ambients");
    std::vector<SimplePart> parts;
    for (const auto& a : s.parts())
        for (const auto& b : t.parts()) {
            IntervalSet c = intersect(a.set, b.set);
            if (!c.empty()) parts.push_back({std::move(c), op(a.value, b.value)});
        }
    return SimpleFunction(std::move(parts), s.ambient());
}

}  // namespace

SimpleFunction simple_add(const SimpleFunction& s, const SimpleFunction& t) {
    return combine(s, t, [](const Rat& a, const Rat& b) { return Rat(a + b); });
}

SimpleFunction simple_mul(const SimpleFunction& s, const SimpleFunction& t) {
    return combine(s, t, [](const Rat& a, const Rat& b) { return Rat(a * b); });
}

SimpleFunction simple_scale(const Rat& c, const SimpleFunction& s) {
    std::vector<SimplePart> parts;
    for (const auto& p : s.parts()) parts.push_back({p.set, c * p.value});
    return SimpleFunction(std::move(parts), s.ambient());
}

SimpleFunction simple_abs(const SimpleFunction& s) {
    std::vector<SimplePart> parts;
    for (const auto& p : s.parts()) parts.push_back({p.set, abs(p.value)});
    return SimpleFunction(std::move(parts), s.ambient());
}

bool simple_le(const SimpleFunction& s, const SimpleFunction& t) {
    for (const auto& a : s.parts())
        for (const auto& b : t.parts())
            if (a.value > b.value && !intersect(a.set, b.set).empty()) return false;
    return true;
}

std::string to_string(const SimpleFunction& s) {
    std::string out = "{";
    for (std::size_t i = 0; i < s.parts().size(); ++i) {
        if (i) out += ", ";
        out += to_string(s.parts()[i].set) + " -> " + to_string(s.parts()[i].value);
    }
    return out + "}";
}

Measure Measure::lebesgue() { return Measure(); }

Measure Measure::dirac(const Rat& x0) {
    Measure m;
    m.kind_ = Kind::dirac;
    m.x0_ = x0;
    return m;
}

Measure Measure::density(const FuncExpr& f, const Interval& ambient) {
    if (!certify_nonnegative(f, from_interval(ambient)))
        throw PreconditionError("density is not certified nonnegative");
    Measure m;
    m.kind_ = Kind::density;
    m.f_ = f;
    return m;
}

std::string to_string(const Measure& m) {
    switch (m.kind()) {
        case Measure::Kind::lebesgue: return "lebesgue";
        case Measure::Kind::dirac: return "dirac(" + to_string(m.point()) + ")";
        case Measure::Kind::density: return "density";
    }
    return "";
}

}  // namespace lk
