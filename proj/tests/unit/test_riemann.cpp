#include "doctest.h"

#include "lk/core/errors.hpp"
#include "lk/expr/parse.hpp"
#include "lk/riemann/riemann.hpp"

#include <cmath>
#include <random>

using namespace lk;

namespace {

Rat q(long a, long b = 1) { return rat(a, b); }
FuncExpr F(const char* s) { return parse_func(s); }

StepFunction random_step(std::mt19937& rng, long d) {
    std::uniform_int_distribution<long> pick(1, d - 1), val(-20, 20), cnt(0, 6);
    std::vector<Rat> xs{0, 1};
    long k = cnt(rng);
    for (long i = 0; i < k; ++i) xs.push_back(q(pick(rng), d));
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::vector<Rat> cs;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) cs.push_back(q(val(rng), 4));
    return StepFunction(xs, cs);
}

// Oracle: integral via a fine common grid on which both functions are constant.
Rat grid_integral(const StepFunction& s, long d) {
    Rat total = 0;
    for (long j = 0; j < d; ++j) total += s.value_at(q(2 * j + 1, 2 * d)) * q(1, d);
    return total;
}

// Random polynomial pieces on a dyadic split of [0,1].
FuncExpr random_piecewise_poly(std::mt19937& rng) {
    std::uniform_int_distribution<long> coef(-6, 6), deg(0, 3), cut(1, 7);
    auto poly = [&] {
        FuncExpr p = fx::constant(q(coef(rng), 2));
        for (long k = 1; k <= deg(rng); ++k)
            p = fx::add(p, fx::mul(fx::constant(q(coef(rng), 3)), fx::pow(fx::x(), k)));
        return p;
    };
    Rat c = q(cut(rng), 8);
    return fx::piecewise({{set::literal(Interval::closed(0, c)), poly()},
                          {set::literal({c, 1, false, true}), poly()}});
}

}  // namespace

TEST_CASE("step_integral") {
    CHECK(step_integral(StepFunction::constant(5)) == 5);
    StepFunction s({0, q(1, 2), 1}, {1, 3});
    CHECK(step_integral(s, 0, 1) == 2);
    CHECK(step_integral(s, 1, 0) == -2);
    CHECK(step_integral(s, q(1, 4), q(3, 4)) == 1);
    CHECK_THROWS_AS(step_integral(s, 0, 2), DomainError);
    CHECK_THROWS_AS(StepFunction({0, 0, 1}, {1, 2}), PreconditionError);
}

TEST_CASE("refine_common and vector-space operations") {
    StepFunction s({0, q(1, 2), 1}, {1, 3});
    StepFunction t({0, q(1, 3), 1}, {2, -1});
    auto [a, b] = refine_common(s, t);
    std::vector<Rat> merged{0, q(1, 3), q(1, 2), 1};
    CHECK(a.breakpoints() == merged);
    CHECK(step_integral(a) == step_integral(s));
    CHECK(step_integral(b) == step_integral(t));
    auto [s1, s2] = refine_common(s, s);
    CHECK(s1 == s);
    CHECK(s2 == s);
    auto sum = step_add(s, t);
    CHECK(sum.values() == std::vector<Rat>{3, 0, 2});
    CHECK(step_integral(step_scale(-1, s)) == -step_integral(s));
    CHECK(step_le(StepFunction::constant(0), StepFunction::constant(1)));
}

TEST_CASE("property: step integral laws") {
    std::mt19937 rng(1);
    for (int t = 0; t < 1000; ++t) {
        auto s = random_step(rng, 24), u = random_step(rng, 24);
        auto [a, b] = refine_common(s, u);
        CHECK(step_integral(a) == step_integral(s));
        CHECK(step_integral(b) == step_integral(u));
        CHECK(step_integral(s) == grid_integral(s, 24));
        Rat c1 = q(static_cast<long>(rng() % 11) - 5, 3), c2 = q(static_cast<long>(rng() % 7) - 3);
        CHECK(step_integral(step_add(step_scale(c1, s), step_scale(c2, u))) ==
              c1 * step_integral(s) + c2 * step_integral(u));
        CHECK(abs(step_integral(s)) <= step_integral(step_abs(s)));
        if (step_le(s, u)) CHECK(step_integral(s) <= step_integral(u));
        auto lo = step_add(s, step_scale(-1, step_abs(s)));
        CHECK(step_le(lo, s));
        Rat m = q(static_cast<long>(rng() % 25), 24);
        CHECK(step_integral(s, 0, m) + step_integral(s, m, 1) == step_integral(s));
    }
}

TEST_CASE("upper_lower_step") {
    std::vector<Rat> p{0, q(1, 4), q(1, 2), q(3, 4), 1};
    auto ul = upper_lower_step(F("x^2"), p);
    CHECK(step_integral(ul.u) == q(15, 32));
    CHECK(step_integral(ul.v) == q(7, 32));
    auto d = upper_lower_step(F("dirichlet(0,1)"), p);
    CHECK(step_integral(d.u) == 1);
    CHECK(step_integral(d.v) == 0);
    auto c = upper_lower_step(F("5"), p);
    CHECK(c.u == c.v);
    CHECK_THROWS_AS(upper_lower_step(F("1/x"), p), UnboundedError);
}

TEST_CASE("riemann_bounds") {
    auto b = riemann_bounds(F("x^2"), 12);
    CHECK(b.gap() <= pow2(-10));
    CHECK(abs(b.lower - q(1, 3)) <= pow2(-10));
    CHECK(abs(b.upper - q(1, 3)) <= pow2(-10));
    auto d = riemann_bounds(F("dirichlet(0,1)"), 6);
    CHECK(d.lower == 0);
    CHECK(d.upper == 1);
    auto c = riemann_bounds(F("7/3"), 0);
    CHECK(c.lower == q(7, 3));
    CHECK(c.upper == q(7, 3));
}

TEST_CASE("property: sandwich and monotone refinement") {
    std::mt19937 rng(2);
    for (int t = 0; t < 20; ++t) {
        FuncExpr f = random_piecewise_poly(rng);
        Rat prev_lo, prev_hi;
        for (long depth = 0; depth <= 14; depth += 2) {
            auto b = riemann_bounds(f, depth);
            CHECK(b.lower <= b.upper);
            if (depth > 0) {
                CHECK(prev_lo <= b.lower);
                CHECK(b.upper <= prev_hi);
            }
            prev_lo = b.lower;
            prev_hi = b.upper;
        }
    }
}

TEST_CASE("riemann_integrable") {
    auto sq = riemann_integrable(F("x^2"), rat(1, 1000000));
    CHECK(sq.kind == RiemannVerdictKind::integrable);
    CHECK(sq.enclosure().contains(q(1, 3)));
    CHECK(sq.enclosure().width() <= rat(1, 1000000));

    auto d = riemann_integrable(F("dirichlet(0,1)"), q(1, 2));
    CHECK(d.kind == RiemannVerdictKind::non_integrable);
    CHECK(d.lower == 0);
    CHECK(d.upper == 1);
    CHECK(d.witness_gap == 1);

    auto s = riemann_integrable(F("sin(x)"), rat(1, 1000000));
    CHECK(s.kind == RiemannVerdictKind::integrable);
    CHECK(to_double(s.lower) <= 1 - std::cos(1.0) + 1e-12);
    CHECK(to_double(s.upper) >= 1 - std::cos(1.0) - 1e-12);

    auto u = riemann_integrable(F("1/sqrt(x)"), q(1, 100));
    CHECK(u.kind == RiemannVerdictKind::not_certified);

    // dirichlet that agrees on both classes is not a witness.
    auto same = riemann_integrable(F("dirichlet(2,2) * x"), q(1, 100));
    CHECK(same.kind == RiemannVerdictKind::integrable);
    // A dirichlet confined to a null set does not block integrability.
    auto null = riemann_integrable(F("indicator([1/2,1/2]) * dirichlet(0,1)"), q(1, 100));
    CHECK(null.kind == RiemannVerdictKind::integrable);
    auto jump = riemann_integrable(F("indicator([0,1/3])"), rat(1, 100000));
    CHECK(jump.kind == RiemannVerdictKind::integrable);
    CHECK(jump.enclosure().contains(q(1, 3)));
}

TEST_CASE("regulated functions") {
    auto r = regulated_from_continuous(F("x"), 4);
    CHECK(r.step.values() == std::vector<Rat>{0, q(1, 4), q(1, 2), q(3, 4)});
    CHECK(r.delta == q(1, 4));
    auto c = regulated_from_continuous(F("3"), 1);
    CHECK(c.delta == 0);
    CHECK(c.step.values() == std::vector<Rat>{3});
    auto s = regulated_from_continuous(F("sin(x)"), 64);
    CHECK(s.delta <= q(1, 64) + pow2(-40));
    CHECK_THROWS_AS(regulated_from_continuous(F("1/x"), 8), UnboundedError);

    auto i = regulated_integral(F("x"), rat(1, 10000));
    CHECK(i.enclosure.contains(q(1, 2)));
    CHECK(i.enclosure.width() <= rat(1, 10000));
    auto z = regulated_integral(F("0"), q(1, 3));
    CHECK(z.enclosure == Enclosure::exact(0));
    auto sq = regulated_integral(F("x^2"), rat(1, 100000));
    CHECK(sq.enclosure.contains(q(1, 3)));
    auto rb = riemann_integrable(F("x^2"), rat(1, 1000));
    CHECK(rb.enclosure().intersects(sq.enclosure));
}

TEST_CASE("ftc_check") {
    Rat h = pow2(-10);
    auto lin = ftc_check(F("x"), h, 32);
    CHECK(lin.max_residual <= h / 2 + h / 8);
    CHECK(lin.max_residual >= h / 2);
    auto c = ftc_check(F("5"), h, 8);
    CHECK(c.max_residual <= h / 8);
    Rat prev = 1;
    for (long e : {6, 8, 10}) {
        auto r = ftc_check(F("sin(x)"), pow2(-e), 16);
        CHECK(r.max_residual < prev);
        CHECK(r.max_residual <= 2 * pow2(-e));
        prev = r.max_residual;
    }
    auto edge = ftc_check(F("x"), q(1, 2), 4);
    CHECK(edge.skipped == 1);
}
