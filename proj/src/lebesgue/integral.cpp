#include "lk/lebesgue/integral.hpp"

#include "lk/core/errors.hpp"
#include "lk/expr/range.hpp"
#include "lk/lebesgue/quadrature.hpp"

#include <algorithm>
#include <deque>
#include <optional>

namespace lk {

namespace {

QuadOptions quad_options(const IntegralOptions& o) {
    QuadOptions q;
    q.tol = o.tol;
    q.max_cells = o.max_cells;
    return q;
}

IntegralResult from_quad(const QuadResult& q) { return {q.value, q.at_tolerance, q.cells}; }

void require_inside(const IntervalSet& e, const Interval& ambient) {
    if (!is_subset(e, from_interval(ambient)))
        throw DomainError(to_string(e) + " is not contained in " + to_string(ambient));
}

Enclosure point_value(const FuncExpr& f, const Rat& x0) {
    RangeEnclosure r = eval_func(f, x0);
    if (!r.bounded()) throw UnboundedError("function is infinite at " + to_string(x0));
    return r.finite();
}

}  // namespace

Enclosure simple_integral(const SimpleFunction& s, const Measure& m, const IntegralOptions& opts) {
    switch (m.kind()) {
        case Measure::Kind::lebesgue: {
            Rat total = 0;
            for (const auto& p : s.parts()) total += p.value * measure(p.set);
            return Enclosure::exact(total);
        }
        case Measure::Kind::dirac: return Enclosure::exact(s.value_at(m.point()));
        case Measure::Kind::density: {
            Enclosure total = Enclosure::exact(0);
            for (const auto& p : s.parts())
                if (sgn(p.value) != 0) total = total + p.value * density_measure(m.density_function(), p.set, opts);
            return total;
        }
    }
    throw InvariantError("unknown measure");
}

IntegralResult lebesgue_integral_bounded(const FuncExpr& f, const Measure& m, const IntegralOptions& opts) {
    return integrate_over(f, from_interval(opts.ambient), m, opts);
}

IntegralResult integrate_over(const FuncExpr& f, const IntervalSet& e, const Measure& m, const IntegralOptions& opts) {
    require_inside(e, opts.ambient);
    switch (m.kind()) {
        case Measure::Kind::lebesgue:
            return from_quad(integrate(ae_canonicalize(f, opts.ambient), e.components(), quad_options(opts)));
        case Measure::Kind::dirac:
            // A point mass sees the value at x0 itself, so no a.e. rewriting.
            if (!opts.ambient.contains(m.point())) throw DomainError("Dirac point outside the ambient interval");
            if (!e.contains(m.point())) return {Enclosure::exact(0), true, 0};
            return {point_value(f, m.point()), true, 0};
        case Measure::Kind::density: {
            FuncExpr prod = fx::mul(f, m.density_function());
            return from_quad(integrate(ae_canonicalize(prod, opts.ambient), e.components(), quad_options(opts)));
        }
    }
    throw InvariantError("unknown measure");
}

namespace {

Interval span(const IntervalSet& s) {
    return Interval::closed(s.components().front().lo, s.components().back().hi);
}

bool nonneg_cell(const FuncExpr& g, const Rat& a, const Rat& b, long depth) {
    try {
        RangeEnclosure r = range_enclosure(g, Interval::closed(a, b));
        if (r.lo.sign() >= 0) return true;
    } catch (const EvalError&) {
        return true;  // undefined everywhere on the cell: nothing negative
    }
    if (depth <= 0) return false;
    Rat m = midpoint(a, b);
    return nonneg_cell(g, a, m, depth - 1) && nonneg_cell(g, m, b, depth - 1);
}

}  // namespace

bool certify_nonnegative(const FuncExpr& f, const IntervalSet& domain, long max_depth) {
    if (domain.empty()) return true;
    FuncExpr g = ae_canonicalize(f, span(domain));
    for (const auto& c : domain.components())
        if (c.lo < c.hi && !nonneg_cell(g, c.lo, c.hi, max_depth)) return false;
    return true;
}

std::string to_string(IntegrabilityKind k) {
    switch (k) {
        case IntegrabilityKind::integrable: return "integrable";
        case IntegrabilityKind::exceeded: return "exceeded";
        case IntegrabilityKind::not_certified: return "not_certified";
    }
    return "";
}

std::vector<Interval> localize_above(const FuncExpr& g, const std::vector<Interval>& cells, const Rat& n,
                                     int max_evaluations, std::size_t max_cells) {
    std::deque<Interval> work(cells.begin(), cells.end());
    std::vector<Interval> out;
    int evals = 0;
    while (!work.empty()) {
        Interval c = work.front();
        work.pop_front();
        RangeEnclosure r;
        try {
            r = range_enclosure(g, Interval::closed(c.lo, c.hi));
        } catch (const EvalError&) {
            continue;
        }
        ++evals;
        if (!r.partial && r.hi <= ExtRat(n)) continue;
        bool straddles = r.partial || r.lo < ExtRat(n);
        if (straddles && evals < max_evaluations && out.size() + work.size() < max_cells) {
            Rat m = midpoint(c.lo, c.hi);
            work.push_back(Interval::closed(c.lo, m));
            work.push_back(Interval::closed(m, c.hi));
        } else {
            out.push_back(c);
        }
    }
    std::sort(out.begin(), out.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    return out;
}

NonnegResult lebesgue_integral_nonneg(const FuncExpr& f, const NonnegOptions& opts) {
    return lebesgue_integral_nonneg(f, from_interval(opts.ambient), opts);
}

NonnegResult lebesgue_integral_nonneg(const FuncExpr& f, const IntervalSet& domain, const NonnegOptions& opts) {
    if (sgn(opts.tol) <= 0) throw PreconditionError("tol must be positive");
    require_inside(domain, opts.ambient);
    NonnegResult res;
    if (measure(domain) == 0) {
        res.kind = IntegrabilityKind::integrable;
        res.value = res.truncated = Enclosure::exact(0);
        return res;
    }
    if (!certify_nonnegative(f, domain)) throw PreconditionError("integrand is not certified nonnegative");
    FuncExpr g = ae_canonicalize(f, opts.ambient);

    QuadOptions first;
    first.tol = opts.tol / 4;
    Enclosure total = integrate(fx::min(g, fx::constant(1)), domain.components(), first).value;
    res.table.push_back({1, total});

    std::vector<Interval> support = domain.components();
    std::optional<Enclosure> prev;
    Rat n = 1;
    for (long k = 0; k < opts.max_doublings; ++k, n *= 2) {
        support = localize_above(g, support, n);
        if (support.empty()) {
            // f <= n everywhere, so min(f, n) = f: no tail.
            res.kind = IntegrabilityKind::integrable;
            res.value = res.truncated = total;
            res.tail = 0;
            return res;
        }
        FuncExpr h = fx::sub(fx::min(g, fx::constant(2 * n)), fx::min(g, fx::constant(n)));
        QuadOptions q;
        q.tol = opts.tol / 16;
        q.max_cells = opts.increment_cells;
        Enclosure delta = integrate(h, support, q).value;
        if (sgn(delta.lo) < 0) delta.lo = 0;  // h >= 0
        total = total + delta;
        res.table.push_back({2 * n, total});
        res.truncated = total;
        if (total.lo > opts.divergence_bound) {
            res.kind = IntegrabilityKind::exceeded;
            res.value = total;
            res.note = "integral of min(f, " + to_string(2 * n) + ") exceeds " + to_string(opts.divergence_bound);
            return res;
        }
        if (delta.hi <= opts.tol / 2) {
            Rat ratio = rat(1, 2);
            if (prev && sgn(prev->lo) > 0) ratio = min(delta.hi / prev->lo, rat(15, 16));
            res.tail = delta.hi * ratio / (1 - ratio);
            res.kind = IntegrabilityKind::integrable;
            res.value = {total.lo, total.hi + res.tail};
            res.note = "tail extrapolated from the last two increments";
            return res;
        }
        prev = delta;
    }
    res.value = total;
    res.note = "no convergence within " + std::to_string(opts.max_doublings) + " doublings";
    return res;
}

Enclosure density_measure(const FuncExpr& g, const IntervalSet& a, const IntegralOptions& opts) {
    if (measure(a) == 0) return Enclosure::exact(0);
    try {
        return integrate(ae_canonicalize(g, opts.ambient), a.components(), quad_options(opts)).value;
    } catch (const UnboundedError&) {
    }
    NonnegOptions no;
    no.tol = opts.tol;
    no.ambient = opts.ambient;
    NonnegResult r = lebesgue_integral_nonneg(g, a, no);
    if (r.kind != IntegrabilityKind::integrable) throw NotCertifiedError("density integral not certified: " + r.note);
    return r.value;
}

std::pair<FuncExpr, FuncExpr> split_pos_neg(const FuncExpr& f) {
    return {fx::max(f, fx::constant(0)), fx::max(fx::neg(f), fx::constant(0))};
}

GeneralResult lebesgue_integral_general(const FuncExpr& f, const NonnegOptions& opts) {
    auto [pos, neg] = split_pos_neg(f);
    GeneralResult r;
    r.positive = lebesgue_integral_nonneg(pos, opts);
    r.negative = lebesgue_integral_nonneg(neg, opts);
    if (r.positive.kind == IntegrabilityKind::exceeded || r.negative.kind == IntegrabilityKind::exceeded)
        r.kind = IntegrabilityKind::exceeded;
    else if (r.positive.kind == IntegrabilityKind::integrable && r.negative.kind == IntegrabilityKind::integrable)
        r.kind = IntegrabilityKind::integrable;
    r.value = r.positive.value - r.negative.value;
    return r;
}

}  // namespace lk
