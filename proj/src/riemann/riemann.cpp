#include "lk/riemann/riemann.hpp"

#include "lk/core/errors.hpp"
#include "lk/expr/range.hpp"


namespace lk {

namespace {

Enclosure bounded_range(const FuncExpr& f, const Interval& cell) {
    RangeEnclosure r = range_enclosure(f, cell);
    if (!r.bounded() || r.partial)
        throw UnboundedError("function is unbounded or undefined on " + to_string(cell));
    return r.finite();
}

}  // namespace

UpperLower upper_lower_step(const FuncExpr& f, const std::vector<Rat>& partition) {
    if (partition.size() < 2) throw PreconditionError("a partition needs at least two points");
    std::vector<Rat> hi, lo;
    for (std::size_t i = 0; i + 1 < partition.size(); ++i) {
        Enclosure e = bounded_range(f, Interval::closed(partition[i], partition[i + 1]));
        lo.push_back(e.lo);
        hi.push_back(e.hi);
    }
    return {StepFunction(partition, std::move(hi)), StepFunction(partition, std::move(lo))};
}

namespace {

struct Cell {
    long level;
    BigInt index;  // cell = [index, index + 1] * 2^-level
    Rat lo, hi;    // enclosure of f on the cell
};

Rat scaled(const Rat& x, long level) {
    Rat r;
    mpq_div_2exp(r.get_mpq_t(), x.get_mpq_t(), static_cast<mp_bitcnt_t>(level));
    return r;
}

Rat cell_width(const Cell& c) { return pow2(-c.level); }

Enclosure cell_range(const FuncExpr& f, long level, const BigInt& index) {
    Interval cell;
    mpq_set_z(cell.lo.get_mpq_t(), index.get_mpz_t());
    mpq_div_2exp(cell.lo.get_mpq_t(), cell.lo.get_mpq_t(), static_cast<mp_bitcnt_t>(level));
    BigInt next = index + 1;
    mpq_set_z(cell.hi.get_mpq_t(), next.get_mpz_t());
    mpq_div_2exp(cell.hi.get_mpq_t(), cell.hi.get_mpq_t(), static_cast<mp_bitcnt_t>(level));
    return bounded_range(f, cell);
}

Cell make_cell(const FuncExpr& f, long level, const BigInt& index) {
    Enclosure e = cell_range(f, level, index);
    return Cell{level, index, std::move(e.lo), std::move(e.hi)};
}

void bounds_rec(const FuncExpr& f, const Cell& c, long depth, RiemannBounds& out) {
    if (c.level == depth || c.lo == c.hi) {
        Rat w = cell_width(c);
        out.lower += w * c.lo;
        out.upper += w * c.hi;
        ++out.cells;
        return;
    }
    BigInt left = 2 * c.index;
    bounds_rec(f, make_cell(f, c.level + 1, left), depth, out);
    bounds_rec(f, make_cell(f, c.level + 1, left + 1), depth, out);
}

}  // namespace

RiemannBounds riemann_bounds(const FuncExpr& f, long depth) {
    if (depth < 0) throw PreconditionError("depth must be nonnegative");
    RiemannBounds out;
    out.depth = depth;
    bounds_rec(f, make_cell(f, 0, 0), depth, out);
    return out;
}

std::string to_string(RiemannVerdictKind k) {
    switch (k) {
        case RiemannVerdictKind::integrable: return "integrable";
        case RiemannVerdictKind::not_certified: return "not_certified";
        case RiemannVerdictKind::non_integrable: return "non_integrable";
    }
    return "";
}

Rat dirichlet_gap_witness(const FuncExpr& f, long depth) {
    if (!contains_op(f, Op::dirichlet)) return 0;
    // On cells free of indicator boundaries, f equals f_rat at rationals and
    // f_irr at irrationals, both continuous; so on any step cell
    // sup f - inf f >= |f_rat - f_irr| at every interior point.
    FuncExpr d = fx::abs(fx::sub(replace_dirichlet(f, true), replace_dirichlet(f, false)));
    Rat total = 0;
    const Rat w = pow2(-depth);
    BigInt cells = BigInt(1) << static_cast<mp_bitcnt_t>(depth);
    for (BigInt i = 0; i < cells; ++i) {
        Rat a = rat(i, BigInt(1)) * w;
        try {
            RangeEnclosure r = range_enclosure(d, Interval::open(a, a + w));
            if (r.partial || !r.lo.finite()) continue;
            total += w * r.lo.value();
        } catch (const EvalError&) {
        }
    }
    return total;
}

namespace {

struct Leaf {
    long level;
    BigInt index;
    Rat lo, hi;
    Rat weight;  // width * (hi - lo)
};

Leaf make_leaf(const FuncExpr& f, long level, const BigInt& index) {
    Enclosure e = cell_range(f, level, index);
    Leaf l{level, index, std::move(e.lo), std::move(e.hi), Rat()};
    mpq_sub(l.weight.get_mpq_t(), l.hi.get_mpq_t(), l.lo.get_mpq_t());
    mpq_div_2exp(l.weight.get_mpq_t(), l.weight.get_mpq_t(), static_cast<mp_bitcnt_t>(level));
    return l;
}

// Refines the leaf list so that every leaf has weight <= tau or sits at max
// depth. This is the state reached by always splitting the leaf of largest
// weight. Sums are updated incrementally.
class Refiner {
public:
    Refiner(const FuncExpr& f, const RiemannOptions& opts) : f_(f), opts_(opts) {
        add(make_leaf(f, 0, 0), leaves_);
    }

    bool refine(const Rat& tau) {
        std::vector<Leaf> next;
        next.reserve(leaves_.size());
        for (auto& l : leaves_) {
            if (l.weight <= tau || l.level >= opts_.max_depth) {
                next.push_back(std::move(l));
                continue;
            }
            lower_ -= scaled(l.lo, l.level);
            upper_ -= scaled(l.hi, l.level);
            split(l, tau, next);
            if (next.size() > opts_.max_cells) return false;
        }
        leaves_ = std::move(next);
        return true;
    }

    const Rat& lower() const { return lower_; }
    const Rat& upper() const { return upper_; }
    std::size_t size() const { return leaves_.size(); }

    long depth() const {
        long d = 0;
        for (const auto& l : leaves_) d = std::max(d, l.level);
        return d;
    }

    Rat max_splittable() const {
        Rat m = 0;
        for (const auto& l : leaves_)
            if (l.level < opts_.max_depth) m = max(m, l.weight);
        return m;
    }

private:
    void add(Leaf l, std::vector<Leaf>& into) {
        lower_ += scaled(l.lo, l.level);
        upper_ += scaled(l.hi, l.level);
        into.push_back(std::move(l));
    }

    void split(const Leaf& l, const Rat& tau, std::vector<Leaf>& into) {
        BigInt left = 2 * l.index;
        for (int k = 0; k < 2; ++k) {
            Leaf c = make_leaf(f_, l.level + 1, left + k);
            if (c.weight <= tau || c.level >= opts_.max_depth) {
                add(std::move(c), into);
                if (into.size() > opts_.max_cells) return;
            } else {
                split(c, tau, into);
            }
        }
    }

    const FuncExpr& f_;
    const RiemannOptions& opts_;
    std::vector<Leaf> leaves_;
    Rat lower_ = 0, upper_ = 0;
};

}  // namespace

RiemannVerdict riemann_integrable(const FuncExpr& f, const Rat& eps, const RiemannOptions& opts) {
    if (sgn(eps) <= 0) throw PreconditionError("eps must be positive");
    RiemannVerdict v;

    Rat witness = dirichlet_gap_witness(f);
    if (sgn(witness) > 0) {
        RiemannBounds b = riemann_bounds(f, 4);
        v.kind = RiemannVerdictKind::non_integrable;
        v.lower = b.lower;
        v.upper = b.upper;
        v.depth = b.depth;
        v.cells = b.cells;
        v.witness_gap = witness;
        v.note = "rational and irrational values differ on a set of positive measure";
        return v;
    }

    try {
        Refiner r(f, opts);
        Rat tau = r.upper() - r.lower();
        for (;;) {
            if (!r.refine(tau)) {
                v.note = "cell budget exhausted";
                return v;
            }
            v.lower = r.lower();
            v.upper = r.upper();
            v.depth = r.depth();
            v.cells = r.size();
            Rat gap = r.upper() - r.lower();
            if (gap <= eps) {
                v.kind = RiemannVerdictKind::integrable;
                return v;
            }
            Rat splittable = r.max_splittable();
            if (sgn(splittable) == 0) {
                v.note = "maximum depth reached";
                return v;
            }
            // The gap scales like sqrt(tau) for smooth f and like tau near jumps.
            Rat ratio = eps / gap;
            Rat next = max(tau * ratio * ratio, tau / 64);
            tau = min(next, splittable / 2);
        }
    } catch (const UnboundedError& e) {
        v.note = e.what();
        return v;
    }
}

RegulatedStep regulated_from_continuous(const FuncExpr& f, long n_cells, const Rat& a, const Rat& b) {
    if (n_cells < 1) throw PreconditionError("need at least one cell");
    if (!(a < b)) throw PreconditionError("empty domain");
    std::vector<Rat> xs(static_cast<std::size_t>(n_cells) + 1);
    for (long i = 0; i <= n_cells; ++i) xs[i] = a + (b - a) * rat(i, n_cells);
    std::vector<Rat> cs;
    cs.reserve(static_cast<std::size_t>(n_cells));
    Rat delta = 0;
    for (long i = 0; i < n_cells; ++i) {
        Enclosure cell = bounded_range(f, Interval::closed(xs[i], xs[i + 1]));
        RangeEnclosure p = eval_func(f, xs[i]);
        Rat c = p.is_point() ? p.lo.value() : p.finite().mid();
        cs.push_back(c);
        // c lies in the cell enclosure, so |f - c| <= its width on the cell.
        delta = max(delta, cell.width());
    }
    return {StepFunction(std::move(xs), std::move(cs)), delta};
}

RegulatedResult regulated_integral(const FuncExpr& f, const Rat& eps, const Rat& a, const Rat& b,
                                   long max_cells) {
    if (sgn(eps) <= 0) throw PreconditionError("eps must be positive");
    for (long n = 1; n <= max_cells; n *= 2) {
        RegulatedStep s = regulated_from_continuous(f, n, a, b);
        Rat slack = s.delta * (b - a);
        if (2 * slack <= eps) {
            Rat mid = step_integral(s.step);
            return {{mid - slack, mid + slack}, n, s.delta};
        }
    }
    throw NotCertifiedError("regulated integral did not reach tolerance within " +
                            std::to_string(max_cells) + " cells");
}

FtcReport ftc_check(const FuncExpr& f, const Rat& h, long probes) {
    if (sgn(h) <= 0) throw PreconditionError("h must be positive");
    if (probes < 1) throw PreconditionError("need at least one probe");
    FtcReport rep;
    rep.h = h;
    rep.max_residual = 0;
    const Rat eps = h * h / 8;
    for (long k = 0; k < probes; ++k) {
        Rat x = rat(k, probes);
        if (x + h > 1) {
            ++rep.skipped;
            continue;
        }
        Enclosure incr = regulated_integral(f, eps, x, x + h).enclosure;
        Enclosure fx = eval_func(f, x).finite();
        Rat q_lo = incr.lo / h, q_hi = incr.hi / h;
        Rat res = max(abs(q_hi - fx.lo), abs(fx.hi - q_lo));
        rep.probes.push_back({x, res});
        rep.max_residual = max(rep.max_residual, res);
    }
    return rep;
}

}  // namespace lk
