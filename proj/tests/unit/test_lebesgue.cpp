#include "doctest.h"

#include "lk/core/errors.hpp"
#include "lk/expr/parse.hpp"
#include "lk/expr/range.hpp"
#include "lk/lebesgue/integral.hpp"
#include "lk/lebesgue/probes.hpp"
#include "lk/lebesgue/quadrature.hpp"
#include "lk/riemann/riemann.hpp"

#include <cmath>
#include <functional>
#include <random>

using namespace lk;

namespace {

Rat q(long a, long b = 1) { return rat(a, b); }
FuncExpr F(const char* s) { return parse_func(s); }
IntervalSet S(const char* s) { return eval_set(parse_set(s)); }

IntervalSet random_set(std::mt19937& rng, long d) {
    std::uniform_int_distribution<long> pos(0, d), cnt(0, 3), bit(0, 1);
    std::vector<Interval> raw;
    long k = cnt(rng);
    for (long i = 0; i < k; ++i) {
        long a = pos(rng), b = pos(rng);
        if (a > b) std::swap(a, b);
        if (a == b) raw.push_back(Interval::point(q(a, d)));
        else raw.push_back({q(a, d), q(b, d), bit(rng) == 1, bit(rng) == 1});
    }
    return canonicalize(std::move(raw));
}

// Random partition of [0,1] into up to four parts.
SimpleFunction random_simple(std::mt19937& rng, long d) {
    std::uniform_int_distribution<long> val(-12, 12);
    IntervalSet rest = from_interval(unit_interval());
    std::vector<SimplePart> parts;
    for (int i = 0; i < 3; ++i) {
        IntervalSet a = intersect(random_set(rng, d), rest);
        rest = difference(rest, a);
        parts.push_back({a, q(val(rng), 3)});
    }
    parts.push_back({rest, q(val(rng), 3)});
    return SimpleFunction(parts);
}

// Oracle: every part is a union of intervals with endpoints in `pts`, so the
// function is constant on each gap; points carry no measure.
Rat grid_integral(const std::function<Rat(const Rat&)>& value, std::vector<Rat> pts) {
    pts.push_back(0);
    pts.push_back(1);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    Rat total = 0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        total += value(midpoint(pts[i], pts[i + 1])) * (pts[i + 1] - pts[i]);
    return total;
}

std::vector<Rat> endpoints_of(const SimpleFunction& s) {
    std::vector<Rat> out;
    for (const auto& p : s.parts())
        for (const auto& e : p.set.endpoints()) out.push_back(e);
    return out;
}

// Contains the double oracle value up to its own rounding.
bool brackets(const Enclosure& e, double v) {
    double slack = 1e-13 * (1 + std::fabs(v));
    return to_double(e.lo) <= v + slack && v - slack <= to_double(e.hi);
}

}  // namespace

TEST_CASE("simple function construction") {
    SimpleFunction s({{S("[0,1/2]"), 1}, {S("(1/2,1]"), 3}});
    CHECK(s.parts().size() == 2);
    CHECK(s.value_at(q(1, 2)) == 1);
    CHECK(s.value_at(q(3, 4)) == 3);
    CHECK_THROWS_AS(SimpleFunction({{S("[0,1/2]"), 1}, {S("[1/2,1]"), 3}}), PreconditionError);
    CHECK_THROWS_AS(SimpleFunction({{S("[0,1/2]"), 1}}), PreconditionError);
    SimpleFunction merged({{S("[0,1/4]"), 2}, {S("(1/4,1/2]"), 2}, {S("(1/2,1]"), 0}});
    CHECK(merged.parts().size() == 2);
}

TEST_CASE("simple_integral examples") {
    SimpleFunction s({{S("[0,1/2]"), 1}, {S("(1/2,1]"), 3}});
    CHECK(simple_integral(s, Measure::lebesgue()) == Enclosure::exact(2));
    CHECK(simple_integral(s, Measure::dirac(q(1, 2))) == Enclosure::exact(1));
    CHECK(simple_integral(SimpleFunction::indicator(S("cantor(1)")), Measure::lebesgue()) == Enclosure::exact(q(2, 3)));
    CHECK(simple_integral(simple_add(s, s), Measure::lebesgue()) == Enclosure::exact(4));

    SimpleFunction chi = SimpleFunction::indicator(S("[0,1/4]"));
    SimpleFunction restricted = simple_mul(s, chi);
    CHECK(restricted.value_at(q(1, 8)) == 1);
    CHECK(restricted.value_at(q(3, 4)) == 0);
    CHECK(simple_integral(restricted, Measure::lebesgue()) == Enclosure::exact(q(1, 4)));

    Enclosure dens = simple_integral(s, Measure::density(F("2*x")));
    CHECK(dens.contains(q(1, 4) + 3 * q(3, 4)));
    CHECK(dens.width() <= q(4, 1000000));
}

TEST_CASE("simple function laws on random pairs") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<long> coef(-5, 5);
    for (int trial = 0; trial < 1000; ++trial) {
        SimpleFunction s = random_simple(rng, 12), t = random_simple(rng, 16);
        Rat c1 = q(coef(rng), 2), c2 = q(coef(rng), 3);
        SimpleFunction comb = simple_add(simple_scale(c1, s), simple_scale(c2, t));
        Rat is = simple_integral(s, Measure::lebesgue()).lo, it = simple_integral(t, Measure::lebesgue()).lo;
        Rat ic = simple_integral(comb, Measure::lebesgue()).lo;
        CHECK(ic == c1 * is + c2 * it);

        std::vector<Rat> pts = endpoints_of(s);
        for (const auto& e : endpoints_of(t)) pts.push_back(e);
        auto direct = [&](const Rat& x) -> Rat { return c1 * s.value_at(x) + c2 * t.value_at(x); };
        CHECK(ic == grid_integral(direct, pts));
        CHECK(is == grid_integral([&](const Rat& x) { return s.value_at(x); }, endpoints_of(s)));

        SimpleFunction prod = simple_mul(s, t);
        auto pv = [&](const Rat& x) -> Rat { return s.value_at(x) * t.value_at(x); };
        CHECK(simple_integral(prod, Measure::lebesgue()).lo == grid_integral(pv, pts));

        // |int s| <= int |s|
        CHECK(abs(is) <= simple_integral(simple_abs(s), Measure::lebesgue()).lo);
        // monotonicity
        if (simple_le(s, t)) CHECK(is <= it);
        CHECK(simple_le(s, simple_add(s, simple_abs(t))));

        // Dirac consistency off breakpoints
        Rat x0 = q(2 * static_cast<long>(rng() % 97) + 1, 194);
        CHECK(simple_integral(s, Measure::dirac(x0)).lo == s.value_at(x0));
    }
}

TEST_CASE("zero law for nonnegative simple functions") {
    SimpleFunction s({{S("[1/3,1/3]"), 5}, {S("[0,1/3) | (1/3,1]"), 0}});
    CHECK(simple_integral(s, Measure::lebesgue()) == Enclosure::exact(0));
    for (const auto& p : s.parts())
        if (p.value > 0) CHECK(measure(p.set) == 0);
}

TEST_CASE("measures") {
    CHECK_THROWS_AS(Measure::density(F("x - 1/2")), PreconditionError);
    CHECK_NOTHROW(Measure::density(F("abs(x - 1/2)")));
    CHECK(to_string(Measure::dirac(q(1, 3))) == "dirac(1/3)");
}

TEST_CASE("lebesgue_integral_bounded") {
    IntegralOptions o;
    CHECK(lebesgue_integral_bounded(F("dirichlet(0,1)"), Measure::lebesgue(), o).value == Enclosure::exact(1));
    CHECK(lebesgue_integral_bounded(F("dirichlet(3,2)"), Measure::lebesgue(), o).value == Enclosure::exact(2));
    IntegralResult r = lebesgue_integral_bounded(F("x^2"), Measure::lebesgue(), o);
    CHECK(r.value.contains(q(1, 3)));
    CHECK(r.value.width() <= o.tol);
    CHECK(r.at_tolerance);
    // Dirac sees the literal value at a rational point.
    CHECK(lebesgue_integral_bounded(F("dirichlet(3,2)"), Measure::dirac(q(1, 2)), o).value == Enclosure::exact(3));
}

TEST_CASE("integrate_over") {
    CHECK(integrate_over(F("1"), S("cantor(4)"), Measure::lebesgue()).value == Enclosure::exact(q(16, 81)));
    IntegralResult r = integrate_over(F("x"), S("[0,1/2]"), Measure::lebesgue());
    CHECK(r.value.contains(q(1, 8)));
    CHECK(r.value.width() <= q(1, 1000000));
    CHECK(integrate_over(F("x^2"), S("[0,1]"), Measure::dirac(q(1, 3))).value == Enclosure::exact(q(1, 9)));
    CHECK(integrate_over(F("x^2"), S("[1/2,1]"), Measure::dirac(q(1, 3))).value == Enclosure::exact(0));
    CHECK_THROWS_AS(integrate_over(F("x"), S("[0,1]"), Measure::dirac(2)), DomainError);
}

TEST_CASE("finite additivity and monotonicity of set integrals") {
    std::mt19937 rng(11);
    const char* fs[] = {"x^2", "sin(3*x) + 2", "abs(x - 1/3)", "1/(1+x)"};
    for (int trial = 0; trial < 40; ++trial) {
        FuncExpr f = F(fs[trial % 4]);
        IntervalSet e = random_set(rng, 24), g = difference(random_set(rng, 20), e);
        IntegralOptions o;
        Enclosure ie = integrate_over(f, e, Measure::lebesgue(), o).value;
        Enclosure ig = integrate_over(f, g, Measure::lebesgue(), o).value;
        Enclosure iu = integrate_over(f, set_union(e, g), Measure::lebesgue(), o).value;
        Enclosure sum = ie + ig;
        CHECK(iu.intersects(sum));
        // f >= 0 here, so E subset E u G gives monotone integrals.
        CHECK(ie.lo <= iu.hi);
    }
}

TEST_CASE("quadrature against closed forms") {
    struct Case {
        const char* f;
        const char* a;
        const char* b;
        double value;
    };
    const Case cases[] = {
        {"sin(3*x) - x", "0", "1", (1 - std::cos(3.0)) / 3 - 0.5},
        {"cos(x)^2", "0", "1", 0.5 + std::sin(2.0) / 4},
        {"sqrt(x)", "0", "1", 2.0 / 3},
        {"x^(1/3)", "0", "1", 0.75},
        {"1/(1+x^2)", "0", "1", std::atan(1.0)},
        {"x*sin(1000*pi*x)", "0", "1", -1.0 / (1000 * M_PI)},
        {"abs(sin(5*x))", "0", "1", (3 + std::cos(5.0)) / 5},
        {"min(x, 1-x)", "0", "1", 0.25},
        {"1/sqrt(x)", "1/4", "1", 1.0},
    };
    for (const auto& c : cases) {
        std::string name = c.f;
        CAPTURE(name);
        QuadOptions o;
        o.tol = q(1, 100000000);
        QuadResult r = integrate(F(c.f), parse_rat(c.a), parse_rat(c.b), o);
        CHECK(r.at_tolerance);
        CHECK(r.value.width() <= o.tol);
        CHECK(brackets(r.value, c.value));
    }
}

TEST_CASE("quadrature exact on polynomials") {
    std::mt19937 rng(3);
    std::uniform_int_distribution<long> coef(-9, 9), deg(0, 6);
    for (int trial = 0; trial < 100; ++trial) {
        FuncExpr p = fx::constant(0);
        Rat oracle = 0;
        Rat b = q(1 + static_cast<long>(rng() % 7), 8);
        for (long k = 0, d = deg(rng); k <= d; ++k) {
            Rat c = q(coef(rng), 5);
            p = fx::add(p, fx::mul(fx::constant(c), fx::pow(fx::x(), k)));
            Rat bk = 1;
            for (long i = 0; i <= k; ++i) bk *= b;
            oracle += c * bk / (k + 1);
        }
        CHECK(integrate(p, 0, b).value == Enclosure::exact(oracle));
    }
}

TEST_CASE("null invariance and sandwich") {
    std::mt19937 rng(5);
    const char* fs[] = {"x + indicator([1/3,1/3])", "dirichlet(1,0)*x + x^2", "piecewise{[0,1/2]: x^2, (1/2,1]: 1 - x}"};
    for (const char* s : fs) {
        CAPTURE(s);
        FuncExpr f = F(s);
        Enclosure a = lebesgue_integral_bounded(f, Measure::lebesgue()).value;
        Enclosure b = lebesgue_integral_bounded(ae_canonicalize(f), Measure::lebesgue()).value;
        CHECK(a.intersects(b));
    }
    std::uniform_int_distribution<long> coef(-6, 6), cut(1, 7);
    for (int trial = 0; trial < 10; ++trial) {
        auto poly = [&] {
            return fx::add(fx::constant(q(coef(rng), 2)),
                           fx::mul(fx::constant(q(coef(rng), 3)), fx::pow(fx::x(), 1 + trial % 3)));
        };
        Rat c = q(cut(rng), 8);
        FuncExpr f = fx::piecewise({{set::literal(Interval::closed(0, c)), poly()},
                                    {set::literal({c, 1, false, true}), poly()}});
        RiemannBounds rb = riemann_bounds(f, 10);
        Enclosure l = lebesgue_integral_bounded(f, Measure::lebesgue()).value;
        CHECK(rb.lower <= l.lo);
        CHECK(l.hi <= rb.upper);
    }
}

TEST_CASE("nonnegative truncation path") {
    NonnegOptions o;
    NonnegResult r = lebesgue_integral_nonneg(F("1/sqrt(x)"), o);
    CHECK(r.kind == IntegrabilityKind::integrable);
    CHECK(r.value.contains(2));
    for (const auto& row : r.table) {
        CAPTURE(to_string(row.n));
        CHECK(row.integral.contains(2 - 1 / row.n));
    }
    for (std::size_t i = 1; i < r.table.size(); ++i) CHECK(r.table[i - 1].integral.lo <= r.table[i].integral.lo);

    NonnegResult p4 = lebesgue_integral_nonneg(F("1/x^(1/4)"), o);
    CHECK(p4.kind == IntegrabilityKind::integrable);
    CHECK(p4.value.contains(q(4, 3)));

    o.divergence_bound = 1000;
    CHECK(lebesgue_integral_nonneg(F("1/x^(1/2)"), o).value.contains(2));
    NonnegResult sq = lebesgue_integral_nonneg(F("1/x^2"), o);
    CHECK(sq.kind == IntegrabilityKind::exceeded);
    CHECK(sq.truncated.lo > 1000);

    NonnegResult bounded = lebesgue_integral_nonneg(F("x^2"), o);
    CHECK(bounded.kind == IntegrabilityKind::integrable);
    CHECK(bounded.tail == 0);
    CHECK(bounded.value.contains(q(1, 3)));

    CHECK_THROWS_AS(lebesgue_integral_nonneg(F("x - 1/2"), o), PreconditionError);
    CHECK(lebesgue_integral_nonneg(F("3*dirichlet(-1,1)"), o).value == Enclosure::exact(3));
}

TEST_CASE("general integral") {
    NonnegOptions o;
    GeneralResult r = lebesgue_integral_general(F("x - 1/2"), o);
    CHECK(r.kind == IntegrabilityKind::integrable);
    CHECK(r.positive.value.contains(q(1, 8)));
    CHECK(r.negative.value.contains(q(1, 8)));
    CHECK(r.value.contains(0));

    GeneralResult c = lebesgue_integral_general(F("-3"), o);
    CHECK(c.positive.value == Enclosure::exact(0));
    CHECK(c.negative.value == Enclosure::exact(3));
    CHECK(c.value == Enclosure::exact(-3));

    GeneralResult s = lebesgue_integral_general(F("sin(3*x) - x"), o);
    CHECK(brackets(s.value, (1 - std::cos(3.0)) / 3 - 0.5));

    o.divergence_bound = 1000;
    CHECK(lebesgue_integral_general(F("1/x^2 - 1"), o).kind == IntegrabilityKind::exceeded);
}

TEST_CASE("abs_continuity_probe") {
    AbsContinuityResult r = abs_continuity_probe(F("1/sqrt(x)"), q(1, 10), 30);
    CHECK(r.delta > 0);
    CHECK(r.delta < q(1, 10) / (2 * r.n));
    CHECK(r.all_passed());
    for (const auto& a : r.sets) CHECK(measure(a) < r.delta);

    AbsContinuityResult c = abs_continuity_probe(F("1"), q(1, 10), 20);
    CHECK(c.n == 1);
    CHECK(c.all_passed());
    for (std::size_t i = 0; i < c.sets.size(); ++i) CHECK(c.values[i] == Enclosure::exact(measure(c.sets[i])));

    AbsContinuityResult x2 = abs_continuity_probe(F("x^2"), q(1, 1000), 100);
    CHECK(x2.all_passed());
    CHECK(x2.worst < q(1, 1000));
}

TEST_CASE("density_measure_check") {
    DensityCheck c = density_measure_check(F("2"), {S("[0,1/4]"), S("[1/2,3/4]")});
    CHECK(c.parts[0] == Enclosure::exact(q(1, 2)));
    CHECK(c.parts[1] == Enclosure::exact(q(1, 2)));
    CHECK(c.whole == Enclosure::exact(1));
    CHECK(c.pass());

    DensityCheck x = density_measure_check(F("x"), {S("[0,1/2]"), S("(1/2,1]")});
    CHECK(x.parts[0].contains(q(1, 8)));
    CHECK(x.parts[1].contains(q(3, 8)));
    CHECK(x.whole.contains(q(1, 2)));
    CHECK(x.pass());

    CHECK(density_measure(F("1/sqrt(x)"), S("[1/3,1/3]")) == Enclosure::exact(0));
    CHECK(density_measure(F("sin(x) + 2"), S("[0,0]")) == Enclosure::exact(0));
    CHECK_THROWS_AS(density_measure_check(F("1"), {S("[0,1/2]"), S("[1/2,1]")}), PreconditionError);

    std::mt19937 rng(9);
    const char* fs[] = {"x", "1/sqrt(x)", "abs(sin(7*x))", "indicator(cantor(2)) + x^2"};
    for (int trial = 0; trial < 24; ++trial) {
        std::vector<IntervalSet> parts;
        IntervalSet used;
        long k = 1 + trial % 6;
        for (long i = 0; i < k; ++i) {
            IntervalSet a = difference(random_set(rng, 32), used);
            parts.push_back(a);
            used = set_union(used, a);
        }
        CHECK(density_measure_check(F(fs[trial % 4]), parts).pass());
    }
}

TEST_CASE("convergence_run") {
    ConvergenceOptions o;
    o.n_min = 2;
    o.n_max = 200;
    o.limit = F("0");
    ConvergenceReport r = convergence_run("n * indicator([1/n, 2/n])", o);
    for (const auto& row : r.rows) CHECK(row.integral == Enclosure::exact(1));
    CHECK(*r.limit_integral == Enclosure::exact(0));
    CHECK(r.hypothesis_flag);
    CHECK(r.probes_consistent);

    ConvergenceOptions m;
    m.mode = ConvergenceMode::monotone;
    m.indices = {1, 2, 4, 8, 16};
    m.limit = F("1/sqrt(x)");
    ConvergenceReport g = convergence_run("min(1/sqrt(x), n)", m);
    CHECK_FALSE(g.hypothesis_flag);
    for (const auto& row : g.rows) CHECK(row.integral.contains(2 - q(1, row.n)));
    CHECK(g.limit_integral->contains(2));

    ConvergenceOptions d;
    d.mode = ConvergenceMode::dominated;
    d.n_max = 12;
    d.dominator = F("1");
    d.limit = F("0");
    ConvergenceReport x = convergence_run("x^n", d);
    CHECK_FALSE(x.hypothesis_flag);
    for (const auto& row : x.rows) CHECK(row.integral == Enclosure::exact(q(1, row.n + 1)));
    CHECK(x.probes_consistent);

    ConvergenceOptions bad;
    bad.mode = ConvergenceMode::monotone;
    bad.n_max = 4;
    CHECK(convergence_run("1/n", bad).hypothesis_flag);
    CHECK_THROWS_AS(convergence_run("n * (", o), ParseError);
}

TEST_CASE("series_integral_check") {
    SeriesCheck g = series_integral_check("indicator((2^(-n), 2^(-n+1)])", 20, F("indicator((0,1])"), pow2(-20));
    CHECK(g.residual == Enclosure::exact(pow2(-20)));
    CHECK(g.pass());
    SeriesCheck x = series_integral_check("x^n/2^n", 20, F("x/(2-x)"), pow2(-18));
    CHECK(x.pass());
    SeriesCheck one = series_integral_check("x^2", 1, F("x^2"), 0);
    CHECK(one.pass());
    CHECK_FALSE(series_integral_check("x^n/2^n", 3, F("x/(2-x)"), pow2(-18)).pass());
}

TEST_CASE("range_partition") {
    RangePartition x = range_partition(F("x"), 4);
    REQUIRE(x.s.parts().size() == 4);
    CHECK(x.s.parts()[0].set == S("[0,1/4)"));
    CHECK(x.s.parts()[0].value == q(1, 4));
    CHECK(x.error_bound <= q(1, 4));

    RangePartition c = range_partition(F("7/3"), 5);
    CHECK(c.s.parts().size() == 1);
    CHECK(c.error_bound == 0);

    RangePartition sq = range_partition(F("x^2"), 16);
    CHECK(sq.s.parts().size() == 16);
    CHECK(sq.error_bound <= q(1, 16));
    Rat integral = simple_integral(sq.s, Measure::lebesgue()).lo;
    CHECK(abs(integral - q(1, 3)) <= q(1, 16));

    // Sampled check of the uniform bound.
    for (long j = 0; j < 200; ++j) {
        Rat xj = q(2 * j + 1, 400);
        CHECK(abs(sq.s.value_at(xj) - xj * xj) <= sq.error_bound);
    }
    RangePartition mixed = range_partition(F("indicator([0,1/3]) + sin(x)"), 8);
    CHECK(mixed.error_bound <= mixed.eps);
}

TEST_CASE("step_approx") {
    StepApprox c = step_approx(F("indicator(cantor(6))"), q(1, 10));
    CHECK(c.exceptional.empty());
    CHECK(c.max_error == 0);
    CHECK(step_integral(c.g) == q(64, 729));

    StepApprox s = step_approx(F("1/sqrt(x)"), q(1, 8));
    CHECK(measure(s.exceptional) < q(1, 8));
    CHECK(s.max_error < q(1, 8));
    for (long j = 0; j < 400; ++j) {
        Rat xj = q(2 * j + 1, 800);
        if (s.exceptional.contains(xj)) continue;
        double fx = 1 / std::sqrt(to_double(xj));
        CHECK(std::fabs(to_double(s.g.value_at(xj)) - fx) < 0.125);
    }

    StepApprox x2 = step_approx(F("x^2"), q(1, 100));
    CHECK(x2.exceptional.empty());
    CHECK(x2.max_error < q(1, 100));
    for (const auto& v : x2.g.values()) CHECK((0 <= v && v <= 1));
}
