#include "lk/lebesgue/probes.hpp"

#include "lk/core/errors.hpp"
#include "lk/expr/parse.hpp"
#include "lk/expr/range.hpp"
#include "lk/lebesgue/quadrature.hpp"

#include <algorithm>
#include <map>
#include <random>

namespace lk {

namespace {

Rat random_fraction(std::mt19937_64& rng, long bits) {
    return Rat(BigInt(static_cast<unsigned long>(rng() >> (64 - bits)))) / pow2(bits);
}

Interval with_ends(const Rat& lo, const Rat& hi, std::mt19937_64& rng) {
    if (lo == hi) return Interval::point(lo);
    return {lo, hi, (rng() & 1) != 0, (rng() & 2) != 0};
}

// A random set of measure m inside the ambient interval; the first
// component sits at the left end when `at_left` is set.
IntervalSet random_set(const Rat& m, const Interval& ambient, bool at_left, std::mt19937_64& rng) {
    long k = 1 + static_cast<long>(rng() % 4);
    std::vector<long> w(k);
    long total = 0;
    for (auto& x : w) total += x = 1 + static_cast<long>(rng() % 16);
    std::vector<Interval> raw;
    for (long i = 0; i < k; ++i) {
        Rat len = m * w[i] / total;
        Rat room = ambient.length() - len;
        Rat start = (at_left && i == 0) ? ambient.lo : ambient.lo + room * random_fraction(rng, 20);
        raw.push_back(with_ends(start, start + len, rng));
    }
    return canonicalize(std::move(raw), ambient);
}

}  // namespace

AbsContinuityResult abs_continuity_probe(const FuncExpr& f, const Rat& eps, long trials, std::uint64_t seed,
                                         const NonnegOptions& opts) {
    if (sgn(eps) <= 0) throw PreconditionError("eps must be positive");
    NonnegResult whole = lebesgue_integral_nonneg(f, opts);
    if (whole.kind != IntegrabilityKind::integrable)
        throw PreconditionError("integrability not certified: " + to_string(whole.kind));

    AbsContinuityResult res;
    bool found = false;
    for (const auto& row : whole.table) {
        Enclosure excess{max(Rat(whole.value.lo - row.integral.hi), Rat(0)), whole.value.hi - row.integral.lo};
        if (excess.hi < eps / 2) {
            res.n = row.n;
            res.excess = excess;
            found = true;
            break;
        }
    }
    if (!found) throw NotCertifiedError("no truncation level leaves less than eps/2 above it");
    // mu(A) < delta gives  int_A f <= N mu(A) + excess < eps/2 + eps/2.
    res.delta = eps / (2 * res.n) * rat(63, 64);

    std::mt19937_64 rng(seed);
    res.trials = trials;
    res.worst = 0;
    for (long t = 0; t < trials; ++t) {
        Rat m = res.delta * rat(1 + static_cast<long>(rng() % 63), 64);
        IntervalSet a = random_set(m, opts.ambient, t % 3 == 0, rng);
        NonnegResult r = lebesgue_integral_nonneg(f, a, opts);
        if (r.value.hi < eps) ++res.passed;
        res.worst = max(res.worst, r.value.hi);
        res.sets.push_back(std::move(a));
        res.values.push_back(r.value);
    }
    return res;
}

DensityCheck density_measure_check(const FuncExpr& f, const std::vector<IntervalSet>& parts,
                                   const IntegralOptions& opts) {
    for (std::size_t i = 0; i < parts.size(); ++i)
        for (std::size_t j = i + 1; j < parts.size(); ++j)
            if (!intersect(parts[i], parts[j]).empty()) throw PreconditionError("parts are not pairwise disjoint");
    if (!certify_nonnegative(f, from_interval(opts.ambient))) throw PreconditionError("density is not certified nonnegative");
    DensityCheck c;
    c.sum = Enclosure::exact(0);
    IntervalSet all;
    for (const auto& p : parts) {
        c.parts.push_back(density_measure(f, p, opts));
        c.sum = c.sum + c.parts.back();
        all = set_union(all, p);
    }
    c.whole = density_measure(f, all, opts);
    c.residual = abs(c.whole.mid() - c.sum.mid());
    c.allowance = c.whole.width() + c.sum.width();
    return c;
}

std::string to_string(ConvergenceMode m) {
    switch (m) {
        case ConvergenceMode::bounded: return "bounded";
        case ConvergenceMode::monotone: return "monotone";
        case ConvergenceMode::dominated: return "dominated";
    }
    return "";
}

namespace {

constexpr long kHypothesisDepth = 8;
constexpr int kProbes = 64;

Enclosure integral_of(const FuncExpr& f, const Rat& tol, const Interval& ambient) {
    IntegralOptions io;
    io.tol = tol;
    io.ambient = ambient;
    try {
        return lebesgue_integral_bounded(f, Measure::lebesgue(), io).value;
    } catch (const UnboundedError&) {
    }
    NonnegOptions no;
    no.tol = tol;
    no.ambient = ambient;
    return lebesgue_integral_general(f, no).value;
}

// Upper bound on sup |f| over the ambient, from ranges on the pieces between
// structural breakpoints.
ExtRat sup_abs(const FuncExpr& f, const Interval& ambient) {
    FuncExpr g = fx::abs(ae_canonicalize(f, ambient));
    std::vector<Rat> cuts{ambient.lo};
    for (const auto& b : structural_breakpoints(g))
        if (ambient.lo < b && b < ambient.hi) cuts.push_back(b);
    cuts.push_back(ambient.hi);
    ExtRat best = Rat(0);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        try {
            best = std::max(best, range_enclosure(g, Interval::closed(cuts[i], cuts[i + 1])).hi);
        } catch (const EvalError&) {
        }
    }
    return best;
}

// Drops min/max/abs alternatives that the ranges on the cell already decide.
FuncExpr prune_on(const FuncExpr& f, const Interval& cell) {
    auto range = [&](const FuncExpr& e) -> std::optional<RangeEnclosure> {
        try {
            return range_enclosure(e, cell);
        } catch (const EvalError&) {
            return std::nullopt;
        }
    };
    switch (f->op) {
        case Op::min:
        case Op::max: {
            FuncExpr a = prune_on(f->args[0], cell), b = prune_on(f->args[1], cell);
            auto ra = range(a), rb = range(b);
            bool is_min = f->op == Op::min;
            if (ra && rb && !ra->partial && !rb->partial) {
                if (ra->hi <= rb->lo) return is_min ? a : b;
                if (rb->hi <= ra->lo) return is_min ? b : a;
            }
            return is_min ? fx::min(a, b) : fx::max(a, b);
        }
        case Op::abs: {
            FuncExpr a = prune_on(f->args[0], cell);
            auto ra = range(a);
            if (ra && !ra->partial && ra->lo.sign() >= 0) return a;
            if (ra && !ra->partial && ra->hi.sign() <= 0) return fx::neg(a);
            return fx::abs(a);
        }
        case Op::add: return fx::add(prune_on(f->args[0], cell), prune_on(f->args[1], cell));
        case Op::sub: return fx::sub(prune_on(f->args[0], cell), prune_on(f->args[1], cell));
        case Op::mul: return fx::mul(prune_on(f->args[0], cell), prune_on(f->args[1], cell));
        case Op::div: return fx::div(prune_on(f->args[0], cell), prune_on(f->args[1], cell));
        case Op::neg: return fx::neg(prune_on(f->args[0], cell));
        default: return f;
    }
}

bool le_cell(const FuncExpr& lo, const FuncExpr& hi, const Rat& a, const Rat& b, long depth) {
    Interval cell = Interval::closed(a, b);
    FuncExpr pl = prune_on(lo, cell), ph = prune_on(hi, cell);
    if (equal(pl, ph)) return true;
    try {
        if (range_enclosure(fx::sub(ph, pl), cell).lo.sign() >= 0) return true;
    } catch (const EvalError&) {
        return true;
    }
    if (depth <= 0) return false;
    Rat m = midpoint(a, b);
    return le_cell(lo, hi, a, m, depth - 1) && le_cell(lo, hi, m, b, depth - 1);
}

// lo <= hi almost everywhere on the ambient, certified on dyadic cells.
bool certify_le(const FuncExpr& lo, const FuncExpr& hi, const Interval& ambient, long depth) {
    return le_cell(ae_canonicalize(lo, ambient), ae_canonicalize(hi, ambient), ambient.lo, ambient.hi, depth);
}

std::optional<Rat> probe_gap(const FuncExpr& f, const FuncExpr& limit, const Rat& x) {
    EvalOptions generic;
    generic.generic_point = true;
    try {
        RangeEnclosure a = eval_func(f, x, generic);
        RangeEnclosure b = eval_func(limit, x, generic);
        if (!a.bounded() || !b.bounded()) return std::nullopt;
        return magnitude(a.finite() - b.finite());
    } catch (const EvalError&) {
        return std::nullopt;
    }
}

}  // namespace

ConvergenceReport convergence_run(std::string_view family, const ConvergenceOptions& opts) {
    std::vector<long> indices = opts.indices;
    if (indices.empty())
        for (long n = opts.n_min; n <= opts.n_max; ++n) indices.push_back(n);
    if (indices.empty()) throw PreconditionError("empty index range");
    if (opts.mode == ConvergenceMode::dominated && !opts.dominator)
        throw PreconditionError("dominated mode needs a dominating function");

    auto member = [&](long n) {
        ParseOptions po;
        po.ambient = opts.ambient;
        po.n = n;
        return parse_func(family, po);
    };
    ConvergenceReport rep;
    rep.mode = opts.mode;
    rep.bound = opts.bound;
    FuncExpr first, prev, last;
    for (long n : indices) {
        FuncExpr f = member(n);
        ConvergenceRow row;
        row.n = n;
        row.integral = integral_of(f, opts.tol, opts.ambient);
        row.sup_abs = sup_abs(f, opts.ambient);
        switch (opts.mode) {
            case ConvergenceMode::bounded:
                if (!rep.bound && row.sup_abs.finite()) rep.bound = row.sup_abs.value();
                row.hypothesis = rep.bound && row.sup_abs <= ExtRat(*rep.bound);
                break;
            case ConvergenceMode::monotone:
                row.hypothesis = certify_le(prev ? prev : fx::constant(0), f, opts.ambient, kHypothesisDepth);
                break;
            case ConvergenceMode::dominated:
                row.hypothesis = certify_le(fx::abs(f), opts.dominator, opts.ambient, kHypothesisDepth);
                break;
        }
        rep.hypothesis_flag = rep.hypothesis_flag || !row.hypothesis;
        rep.rows.push_back(row);
        if (!first) first = f;
        prev = last = f;
    }

    if (opts.limit) {
        rep.limit_integral = integral_of(opts.limit, opts.tol, opts.ambient);
        rep.gap = rep.rows.back().integral - *rep.limit_integral;
        rep.probe_distance = 0;
        for (int j = 0; j < kProbes; ++j) {
            Rat x = opts.ambient.lo + opts.ambient.length() * rat(2 * j + 1, 2 * kProbes);
            auto d_first = probe_gap(first, opts.limit, x);
            auto d_last = probe_gap(last, opts.limit, x);
            if (!d_last || !d_first) continue;
            rep.probe_distance = max(rep.probe_distance, *d_last);
            ++rep.probes_total;
            if (*d_last <= *d_first + pow2(-60)) ++rep.probes_closer;
        }
        rep.probes_consistent = 8 * rep.probes_closer >= 7 * rep.probes_total;
    }
    return rep;
}

SeriesCheck series_integral_check(std::string_view term, long n_terms, const FuncExpr& limit, const Rat& tail_bound,
                                  const IntegralOptions& opts) {
    if (n_terms < 1) throw PreconditionError("need at least one term");
    SeriesCheck c;
    c.tail_bound = tail_bound;
    c.partial = Enclosure::exact(0);
    Rat tol = opts.tol / n_terms;
    for (long n = 1; n <= n_terms; ++n) {
        ParseOptions po;
        po.ambient = opts.ambient;
        po.n = n;
        FuncExpr u = parse_func(term, po);
        if (!certify_nonnegative(u, from_interval(opts.ambient)))
            throw PreconditionError("term " + std::to_string(n) + " is not certified nonnegative");
        c.terms.push_back(integral_of(u, tol, opts.ambient));
        c.partial = c.partial + c.terms.back();
    }
    c.limit = integral_of(limit, opts.tol, opts.ambient);
    c.residual = c.limit - c.partial;
    return c;
}

namespace {

// Open cells between structural breakpoints, plus the breakpoints and the
// closed ends of the ambient as point cells.
std::vector<Interval> initial_cells(const FuncExpr& g, const Interval& ambient, bool with_points) {
    std::vector<Rat> cuts{ambient.lo};
    for (const auto& b : structural_breakpoints(g))
        if (ambient.lo < b && b < ambient.hi) cuts.push_back(b);
    cuts.push_back(ambient.hi);
    std::vector<Interval> out;
    for (std::size_t i = 0; i < cuts.size(); ++i) {
        bool at_lo = i == 0, at_hi = i + 1 == cuts.size();
        if (with_points && ((!at_lo && !at_hi) || (at_lo && ambient.lo_closed) || (at_hi && ambient.hi_closed)))
            out.push_back(Interval::point(cuts[i]));
        if (!at_hi) out.push_back(Interval::open(cuts[i], cuts[i + 1]));
    }
    return out;
}

std::pair<Interval, Interval> bisect(const Interval& c) {
    Rat m = midpoint(c.lo, c.hi);
    return {{c.lo, m, c.lo_closed, false}, {m, c.hi, true, c.hi_closed}};
}

}  // namespace

RangePartition range_partition(const FuncExpr& f, long n, const RangePartitionOptions& opts) {
    if (n < 1) throw PreconditionError("n must be positive");
    const Interval& amb = opts.ambient;
    FuncExpr g = ae_canonicalize(f, amb);
    RangeEnclosure global = range_enclosure(g, amb);
    if (!global.bounded()) throw PreconditionError("range_partition needs a bounded function");
    Rat a = global.lo.value(), b = global.hi.value();
    if (a == b) return {SimpleFunction::constant(a, amb), 0, 0, 0, false};

    Rat eps = (b - a) / n;
    auto level = [&](long i) -> Rat { return a + eps * i; };
    std::map<long, std::vector<Interval>> bands;
    Rat error = 0;
    long unresolved = 0;
    std::size_t evaluations = 0;
    bool over_budget = false;

    struct Item {
        Interval cell;
        long depth;
    };
    std::vector<Item> work;
    for (auto& c : initial_cells(g, amb, true)) work.push_back({c, 0});
    while (!work.empty() && !over_budget) {
        Item it = work.back();
        work.pop_back();
        RangeEnclosure r = range_enclosure(g, it.cell);
        if (++evaluations > opts.max_cells) over_budget = true;
        Rat lo = r.lo.value(), hi = r.hi.value();
        // Smallest band whose upper level reaches hi.
        long i = std::clamp<long>(static_cast<long>(floor((hi - a) / eps).get_si()), 1, n);
        if (level(i) < hi) ++i;
        i = std::min(i, n);
        if (level(i - 1) <= lo) {
            bands[i].push_back(it.cell);
            error = max(error, Rat(level(i) - lo));
            continue;
        }
        if (it.depth < opts.max_depth && !it.cell.is_point()) {
            auto [l, rr] = bisect(it.cell);
            work.push_back({rr, it.depth + 1});
            work.push_back({l, it.depth + 1});
            continue;
        }
        // The range straddles a level: take the nearest level as the value.
        Rat mid = midpoint(lo, hi);
        long j = std::clamp<long>(static_cast<long>(floor((mid - a) / eps + rat(1, 2)).get_si()), 1, n);
        bands[j].push_back(it.cell);
        error = max(error, max(Rat(level(j) - lo), Rat(hi - level(j))));
        ++unresolved;
    }

    if (over_budget) {
        // Uniform domain partition with range midpoints.
        constexpr long kCells = 1024;
        std::vector<SimplePart> parts;
        Rat err = 0;
        for (const auto& c0 : initial_cells(g, amb, true)) {
            long pieces = c0.is_point() ? 1 : kCells;
            for (long k = 0; k < pieces; ++k) {
                Interval c = c0;
                if (!c0.is_point()) {
                    c.lo = c0.lo + c0.length() * rat(k, pieces);
                    c.hi = c0.lo + c0.length() * rat(k + 1, pieces);
                    c.lo_closed = k > 0 || c0.lo_closed;
                    c.hi_closed = k + 1 == pieces && c0.hi_closed;
                }
                RangeEnclosure r = range_enclosure(g, c);
                Rat mid = midpoint(r.lo.value(), r.hi.value());
                err = max(err, Rat(r.hi.value() - mid));
                parts.push_back({canonicalize({c}, amb), mid});
            }
        }
        return {SimpleFunction(std::move(parts), amb), err, eps, 0, true};
    }

    std::vector<SimplePart> parts;
    for (auto& [i, cells] : bands) parts.push_back({canonicalize(std::move(cells), amb), level(i)});
    return {SimpleFunction(std::move(parts), amb), error, eps, unresolved, false};
}

StepApprox step_approx(const FuncExpr& f, const Rat& eps, const Interval& ambient, long max_depth) {
    if (sgn(eps) <= 0) throw PreconditionError("eps must be positive");
    constexpr std::size_t kMaxLeaves = std::size_t{1} << 20;
    FuncExpr g = ae_canonicalize(f, ambient);
    std::optional<Enclosure> global;
    try {
        RangeEnclosure r = range_enclosure(g, ambient);
        if (r.bounded()) global = r.finite();
    } catch (const EvalError&) {
    }
    auto clamp_value = [&](const Rat& v) { return global ? std::clamp(v, global->lo, global->hi) : v; };

    // Exceptional cover: cells holding {|g| > N} for the first N = 2^j whose
    // cover has measure below eps/2.
    std::vector<Interval> cover;
    if (!global) {
        FuncExpr mag = fx::abs(g);
        std::vector<Interval> start{Interval::closed(ambient.lo, ambient.hi)};
        bool found = false;
        for (long j = 0; j < 64 && !found; ++j) {
            cover = localize_above(mag, start, pow2(j), 4096, 256);
            Rat mu = 0;
            for (const auto& c : cover) mu += c.length();
            found = mu < eps / 2;
        }
        if (!found) throw NotCertifiedError("no truncation level with a small exceptional set");
    }
    IntervalSet cover_set = canonicalize(cover, ambient);

    struct Leaf {
        Rat lo, hi;
        Rat value;
        bool exceptional;
    };
    std::vector<Leaf> leaves;
    std::vector<Interval> unresolved;
    Rat max_error = 0;
    std::vector<std::pair<Interval, long>> work;
    for (const auto& c : initial_cells(g, ambient, false)) {
        IntervalSet rest = difference(from_interval(c), cover_set, ambient);
        for (const auto& piece : rest.components())
            if (piece.lo < piece.hi) work.push_back({Interval::open(piece.lo, piece.hi), 0});
    }
    for (const auto& c : cover_set.components())
        if (c.lo < c.hi) leaves.push_back({c.lo, c.hi, clamp_value(0), true});

    while (!work.empty()) {
        auto [cell, depth] = work.back();
        work.pop_back();
        if (leaves.size() > kMaxLeaves) throw NotCertifiedError("step approximation exceeded its cell budget");
        std::optional<RangeEnclosure> r;
        try {
            r = range_enclosure(g, cell);
        } catch (const EvalError&) {
        }
        if (r && r->bounded() && r->width() < eps) {
            Rat v = clamp_value(midpoint(r->lo.value(), r->hi.value()));
            max_error = max(max_error, max(Rat(v - r->lo.value()), Rat(r->hi.value() - v)));
            leaves.push_back({cell.lo, cell.hi, v, false});
        } else if (depth < max_depth) {
            Rat m = midpoint(cell.lo, cell.hi);
            work.push_back({Interval::open(m, cell.hi), depth + 1});
            work.push_back({Interval::open(cell.lo, m), depth + 1});
        } else {
            leaves.push_back({cell.lo, cell.hi, clamp_value(0), true});
            unresolved.push_back(Interval::closed(cell.lo, cell.hi));
        }
    }

    StepApprox res;
    res.exceptional = set_union(cover_set, canonicalize(unresolved, ambient));
    if (!(measure(res.exceptional) < eps)) throw NotCertifiedError("exceptional set is not smaller than eps");
    std::sort(leaves.begin(), leaves.end(), [](const Leaf& x, const Leaf& y) { return x.lo < y.lo; });
    std::vector<Rat> xs{leaves.front().lo};
    std::vector<Rat> vs;
    for (const auto& l : leaves) {
        if (!vs.empty() && vs.back() == l.value) {
            xs.back() = l.hi;
            continue;
        }
        xs.push_back(l.hi);
        vs.push_back(l.value);
    }
    res.g = StepFunction(std::move(xs), std::move(vs));
    res.max_error = max_error;
    res.cells = static_cast<long>(leaves.size());
    return res;
}

}  // namespace lk
