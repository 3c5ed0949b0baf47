#include "lk/expr/range.hpp"

#include "lk/core/certified.hpp"
#include "lk/core/errors.hpp"

namespace lk {

Enclosure RangeEnclosure::finite() const {
    if (!bounded()) throw UnboundedError("range enclosure is unbounded");
    return {lo.value(), hi.value()};
}

Rat RangeEnclosure::width() const { return finite().width(); }

std::string to_string(const RangeEnclosure& r) {
    return "[" + to_string(r.lo) + ", " + to_string(r.hi) + "]";
}

namespace {

using R = RangeEnclosure;

R exact(const Rat& v) { return {v, v, true, true, false}; }

ExtRat ext_add(const ExtRat& a, const ExtRat& b, bool& undefined) {
    if (a.finite() && b.finite()) return Rat(a.value() + b.value());
    if (!a.finite() && !b.finite() && a.kind() != b.kind()) {
        undefined = true;
        return ExtRat();
    }
    return a.finite() ? b : a;
}

// 0 * inf = 0 (measure-theoretic convention).
ExtRat ext_mul(const ExtRat& a, const ExtRat& b) {
    if (a.finite() && b.finite()) return Rat(a.value() * b.value());
    int s = a.sign() * b.sign();
    if (s == 0) return Rat(0);
    return s > 0 ? ExtRat::pos_inf() : ExtRat::neg_inf();
}

ExtRat ext_min(const ExtRat& a, const ExtRat& b) { return b < a ? b : a; }
ExtRat ext_max(const ExtRat& a, const ExtRat& b) { return a < b ? b : a; }

class Evaluator {
public:
    Evaluator(const EvalOptions& opts, bool point) : opts_(opts), point_(point) {}

    R eval(const FuncExpr& f, const Interval& j) {
        switch (f->op) {
            case Op::constant: return exact(f->a);
            case Op::pi: {
                const auto& p = pi_bounds();
                return {p.lo, p.hi, false, false, false};
            }
            case Op::var: return {j.lo, j.hi, j.lo_closed, j.hi_closed, false};
            case Op::add: return add(eval(f->args[0], j), eval(f->args[1], j));
            case Op::sub: return add(eval(f->args[0], j), neg(eval(f->args[1], j)));
            case Op::mul: return mul(eval(f->args[0], j), eval(f->args[1], j));
            case Op::div: return div(eval(f->args[0], j), eval(f->args[1], j));
            case Op::neg: return neg(eval(f->args[0], j));
            case Op::pow: return pow(eval(f->args[0], j), f->k);
            case Op::rpow: return rpow(eval(f->args[0], j), f->a);
            case Op::sin: return trig(eval(f->args[0], j), false);
            case Op::cos: return trig(eval(f->args[0], j), true);
            case Op::sqrt: return sqrt(eval(f->args[0], j));
            case Op::abs: return abs(eval(f->args[0], j));
            case Op::min: return min(eval(f->args[0], j), eval(f->args[1], j));
            case Op::max: return neg(min(neg(eval(f->args[0], j)), neg(eval(f->args[1], j))));
            case Op::indicator: return indicator(f->set->value, j);
            case Op::dirichlet: return dirichlet(f->a, f->b, j);
            case Op::piecewise: return piecewise(f, j);
        }
        throw InvariantError("unknown expression node");
    }

private:
    [[noreturn]] void undefined(const std::string& what) const {
        throw EvalError(what + (point_ ? "" : " on the whole interval"));
    }

    static R whole_line(bool partial) {
        return {ExtRat::neg_inf(), ExtRat::pos_inf(), false, false, partial};
    }

    R add(const R& a, const R& b) {
        bool undef = false;
        ExtRat lo = ext_add(a.lo, b.lo, undef);
        ExtRat hi = ext_add(a.hi, b.hi, undef);
        if (undef) {
            if (point_ && a.lo == a.hi && b.lo == b.hi) undefined("inf - inf");
            return whole_line(true);
        }
        R r{lo, hi, false, false, a.partial || b.partial};
        if (b.is_point() && b.lo_attained) {
            r.lo_attained = a.lo_attained;
            r.hi_attained = a.hi_attained;
        } else if (a.is_point() && a.lo_attained) {
            r.lo_attained = b.lo_attained;
            r.hi_attained = b.hi_attained;
        }
        return r;
    }

    static R neg(const R& a) { return {-a.hi, -a.lo, a.hi_attained, a.lo_attained, a.partial}; }

    static R mul(const R& a, const R& b) {
        ExtRat p[4] = {ext_mul(a.lo, b.lo), ext_mul(a.lo, b.hi), ext_mul(a.hi, b.lo),
                       ext_mul(a.hi, b.hi)};
        R r{p[0], p[0], false, false, a.partial || b.partial};
        for (const auto& v : p) {
            r.lo = ext_min(r.lo, v);
            r.hi = ext_max(r.hi, v);
        }
        // Scaling by an exact constant preserves attainment.
        const R* var = nullptr;
        const R* c = nullptr;
        if (b.is_point() && b.lo_attained) {
            var = &a;
            c = &b;
        } else if (a.is_point() && a.lo_attained) {
            var = &b;
            c = &a;
        }
        if (var != nullptr) {
            int s = c->lo.sign();
            if (s > 0) {
                r.lo_attained = var->lo_attained;
                r.hi_attained = var->hi_attained;
            } else if (s < 0) {
                r.lo_attained = var->hi_attained;
                r.hi_attained = var->lo_attained;
            } else {
                r.lo_attained = r.hi_attained = true;
            }
        }
        return r;
    }

    R div(const R& a, const R& b) {
        const bool partial = a.partial || b.partial;
        const bool b_zero = b.lo.sign() <= 0 && b.hi.sign() >= 0;
        if (b.lo.sign() == 0 && b.hi.sign() == 0) {
            if (a.lo.sign() > 0) return {ExtRat::pos_inf(), ExtRat::pos_inf(), true, true, partial};
            if (a.hi.sign() < 0) return {ExtRat::neg_inf(), ExtRat::neg_inf(), true, true, partial};
            if (a.lo.sign() == 0 && a.hi.sign() == 0) undefined("0/0");
            return whole_line(true);
        }
        if (!a.lo.finite() && !b.lo.finite() && a.lo == a.hi && b.lo == b.hi && point_)
            undefined("inf/inf");
        R inv;
        if (!b_zero) {
            auto recip = [](const ExtRat& v) -> ExtRat { return v.finite() ? ExtRat(1 / v.value()) : ExtRat(0); };
            inv = {recip(b.hi), recip(b.lo), b.hi_attained && b.hi.finite(),
                   b.lo_attained && b.lo.finite(), b.partial};
        } else if (b.lo.sign() == 0) {
            inv = {b.hi.finite() ? ExtRat(1 / b.hi.value()) : ExtRat(0), ExtRat::pos_inf(),
                   b.hi_attained && b.hi.finite(), b.lo_attained, b.partial};
        } else if (b.hi.sign() == 0) {
            inv = {ExtRat::neg_inf(), b.lo.finite() ? ExtRat(1 / b.lo.value()) : ExtRat(0),
                   b.hi_attained, b.lo_attained && b.lo.finite(), b.partial};
        } else {
            return whole_line(partial || (a.lo.sign() <= 0 && a.hi.sign() >= 0));
        }
        R r = mul(a, inv);
        bool a_zero = a.lo.sign() <= 0 && a.hi.sign() >= 0;
        bool a_inf = !a.lo.finite() || !a.hi.finite();
        bool b_inf = !b.lo.finite() || !b.hi.finite();
        if ((b_zero && a_zero) || (a_inf && b_inf)) r.partial = true;
        if (!(a.is_point() && a.lo_attained)) r.lo_attained = r.hi_attained = false;
        return r;
    }

    static ExtRat ext_pow(const ExtRat& v, long k) {
        if (v.finite()) return lk::pow(v.value(), k);
        if (k == 0) return Rat(1);
        if (v.is_pos_inf() || k % 2 == 0) return ExtRat::pos_inf();
        return ExtRat::neg_inf();
    }

    static R pow(const R& a, long k) {
        if (k == 0) return exact(1);
        if (k % 2 == 1) return {ext_pow(a.lo, k), ext_pow(a.hi, k), a.lo_attained, a.hi_attained, a.partial};
        if (a.lo.sign() >= 0)
            return {ext_pow(a.lo, k), ext_pow(a.hi, k), a.lo_attained, a.hi_attained, a.partial};
        if (a.hi.sign() <= 0)
            return {ext_pow(a.hi, k), ext_pow(a.lo, k), a.hi_attained, a.lo_attained, a.partial};
        ExtRat l = ext_pow(a.lo, k), h = ext_pow(a.hi, k);
        bool hi_att = h < l ? a.lo_attained : (l < h ? a.hi_attained : a.lo_attained || a.hi_attained);
        return {Rat(0), ext_max(l, h), false, hi_att, a.partial};
    }

    // Shared domain handling for sqrt and rational powers: clamps the base to
    // [0, inf) and marks the excluded part.
    R clamp_nonneg(R a, const char* what) {
        if (a.hi.sign() < 0) undefined(std::string(what) + " of a negative number");
        if (a.lo.sign() < 0) {
            if (point_ && a.lo == a.hi) undefined(std::string(what) + " of a negative number");
            a.lo = Rat(0);
            a.lo_attained = false;
            a.partial = true;
        }
        return a;
    }

    R sqrt(const R& in) {
        R a = clamp_nonneg(in, "sqrt");
        R r{Rat(0), Rat(0), false, false, a.partial};
        auto lo = sqrt_bounds(a.lo.value());
        r.lo = lo.lo;
        r.lo_attained = a.lo_attained && lo.lo == lo.hi;
        if (a.hi.finite()) {
            auto hi = sqrt_bounds(a.hi.value());
            r.hi = hi.hi;
            r.hi_attained = a.hi_attained && hi.lo == hi.hi;
        } else {
            r.hi = ExtRat::pos_inf();
        }
        return r;
    }

    R rpow(const R& in, const Rat& e) {
        R a = clamp_nonneg(in, "rational power");
        const int s = sgn(e);
        if (s == 0) return exact(1);
        // Bounds of v^e at a single base value, extended to 0 and inf.
        auto at = [&](const ExtRat& v, bool upper) -> std::pair<ExtRat, bool> {
            if (!v.finite()) return {s > 0 ? ExtRat::pos_inf() : ExtRat(0), false};
            if (sgn(v.value()) == 0) return {s > 0 ? ExtRat(0) : ExtRat::pos_inf(), true};
            auto b = rpow_bounds(v.value(), e);
            return {upper ? b.hi : b.lo, b.lo == b.hi};
        };
        R r{Rat(0), Rat(0), false, false, a.partial};
        if (s > 0) {
            auto [l, le] = at(a.lo, false);
            auto [h, he] = at(a.hi, true);
            r.lo = l;
            r.hi = h;
            r.lo_attained = le && a.lo_attained;
            r.hi_attained = he && a.hi_attained;
        } else {
            auto [l, le] = at(a.hi, false);
            auto [h, he] = at(a.lo, true);
            r.lo = l;
            r.hi = h;
            r.lo_attained = le && a.hi_attained;
            r.hi_attained = he && a.lo_attained;
        }
        return r;
    }

    static R trig(const R& a, bool is_cos) {
        if (!a.bounded()) return {Rat(-1), Rat(1), false, false, a.partial};
        TrigRange t = is_cos ? cos_range(a.lo.value(), a.hi.value(), a.lo_attained, a.hi_attained)
                             : sin_range(a.lo.value(), a.hi.value(), a.lo_attained, a.hi_attained);
        // An interior extremum is reached only if the argument sweeps its
        // enclosure, which is not tracked.
        return {t.lo, t.hi, false, false, a.partial};
    }

    static R abs(const R& a) {
        if (a.lo.sign() >= 0) return a;
        if (a.hi.sign() <= 0) return neg(a);
        ExtRat l = -a.lo;
        bool hi_att = a.hi < l ? a.lo_attained : (l < a.hi ? a.hi_attained : a.lo_attained || a.hi_attained);
        return {Rat(0), ext_max(l, a.hi), false, hi_att, a.partial};
    }

    static R min(const R& a, const R& b) {
        R r{ext_min(a.lo, b.lo), ext_min(a.hi, b.hi), false, false, a.partial || b.partial};
        r.lo_attained = (r.lo == a.lo && a.lo_attained) || (r.lo == b.lo && b.lo_attained);
        // The upper end is attained when one side is entirely below the other.
        if (a.hi <= b.lo) r.hi_attained = a.hi_attained;
        else if (b.hi <= a.lo) r.hi_attained = b.hi_attained;
        return r;
    }

    static R indicator(const IntervalSet& s, const Interval& j) {
        IntervalSet inside = intersect(s, from_interval(j));
        if (inside.empty()) return exact(0);
        if (inside == from_interval(j)) return exact(1);
        return {Rat(0), Rat(1), true, true, false};
    }

    R dirichlet(const Rat& a, const Rat& b, const Interval& j) {
        if (j.is_point()) return exact(opts_.generic_point ? b : a);
        return {lk::min(a, b), lk::max(a, b), true, true, false};
    }

    R piecewise(const FuncExpr& f, const Interval& j) {
        IntervalSet cell = from_interval(j);
        IntervalSet rest = cell;
        std::optional<R> acc;
        auto merge = [&](const R& v) {
            if (!acc) {
                acc = v;
                return;
            }
            R& m = *acc;
            if (v.lo < m.lo) {
                m.lo = v.lo;
                m.lo_attained = v.lo_attained;
            } else if (v.lo == m.lo) {
                m.lo_attained = m.lo_attained || v.lo_attained;
            }
            if (m.hi < v.hi) {
                m.hi = v.hi;
                m.hi_attained = v.hi_attained;
            } else if (v.hi == m.hi) {
                m.hi_attained = m.hi_attained || v.hi_attained;
            }
            m.partial = m.partial || v.partial;
        };
        std::size_t undefined_parts = 0;
        for (const auto& br : f->branches) {
            IntervalSet on = intersect(br.set->value, cell);
            if (on.empty()) continue;
            rest = difference(rest, on, j);
            for (const auto& c : on.components()) {
                try {
                    merge(eval(br.f, c));
                } catch (const EvalError&) {
                    if (point_) throw;
                    ++undefined_parts;
                }
            }
        }
        if (!rest.empty()) merge(exact(0));
        if (!acc) undefined("expression undefined");
        if (undefined_parts > 0) acc->partial = true;
        return *acc;
    }

    const EvalOptions& opts_;
    bool point_;
};

}  // namespace

RangeEnclosure range_enclosure(const FuncExpr& f, const Interval& j, const EvalOptions& opts) {
    if (j.empty()) throw PreconditionError("range enclosure over an empty interval");
    return Evaluator(opts, j.is_point()).eval(f, j);
}

RangeEnclosure eval_func(const FuncExpr& f, const Rat& x, const EvalOptions& opts) {
    return Evaluator(opts, true).eval(f, Interval::point(x));
}

FuncExpr ae_canonicalize(const FuncExpr& f, const Interval& ambient) {
    switch (f->op) {
        case Op::dirichlet: return fx::constant(f->b);
        case Op::indicator: {
            Rat m = measure(f->set->value);
            if (sgn(m) == 0) return fx::constant(0);
            if (m == ambient.length()) return fx::constant(1);
            return f;
        }
        case Op::piecewise: {
            std::vector<Branch> kept;
            for (const auto& br : f->branches) {
                Rat m = measure(br.set->value);
                if (sgn(m) == 0) continue;
                FuncExpr g = ae_canonicalize(br.f, ambient);
                if (m == ambient.length()) return g;
                kept.push_back({br.set, std::move(g)});
            }
            if (kept.empty()) return fx::constant(0);
            return fx::piecewise(std::move(kept));
        }
        default: break;
    }
    if (f->args.empty()) return f;
    std::vector<FuncExpr> args;
    bool changed = false;
    for (const auto& a : f->args) {
        args.push_back(ae_canonicalize(a, ambient));
        changed = changed || args.back() != a;
    }
    if (!changed) return f;
    FuncNode n = *f;
    n.args = std::move(args);
    return std::make_shared<const FuncNode>(std::move(n));
}

}  // namespace lk
