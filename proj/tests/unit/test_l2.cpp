#include "doctest.h"

#include "lk/core/errors.hpp"
#include "lk/expr/parse.hpp"
#include "lk/expr/range.hpp"
#include "lk/l2/l2.hpp"
#include "lk/lebesgue/probes.hpp"

#include <cmath>
#include <random>
#include <sstream>

using namespace lk;

namespace {

Rat q(long a, long b = 1) { return rat(a, b); }

FuncExpr F(const char* s) {
    ParseOptions po;
    po.ambient = l2_ambient();
    return parse_func(s, po);
}

L2Element E(const char* s) { return L2Element(F(s)); }

bool brackets(const Enclosure& e, double v, double slack = 1e-12) {
    return to_double(e.lo) <= v + slack && v - slack <= to_double(e.hi);
}

const Rat kTol = q(1, 1000000000);

}  // namespace

TEST_CASE("inner products and norms") {
    Enclosure cs = inner(E("cos(pi*x)"), E("sin(pi*x)"));
    CHECK(cs.contains(0));
    CHECK(cs.width() <= kTol);
    CHECK(inner(E("1/sqrt(2)"), E("1/sqrt(2)")).contains(1));
    CHECK(inner(E("x"), E("x")).contains(q(2, 3)));

    CHECK(E("0").norm() == Enclosure::exact(0));
    for (long n = 1; n <= 8; ++n) {
        std::string s = "cos(" + std::to_string(n) + "*pi*x)";
        CHECK(E(s.c_str()).norm().contains(1));
    }
    CHECK(brackets(E("x").norm(), std::sqrt(2.0 / 3)));

    // |a f| = |a| |f|
    Enclosure nf = E("sin(2*x) + x^2").norm(), naf = E("-3*(sin(2*x) + x^2)").norm();
    CHECK(abs(naf.mid() - 3 * nf.mid()) <= naf.width() + 3 * nf.width());

    // commutativity and bilinearity within widths
    L2Element f = E("x^3 - x"), g = E("cos(3*x)"), h = E("abs(x)");
    Enclosure fg = inner(f, g), gf = inner(g, f);
    CHECK(fg.intersects(gf));
    Enclosure lhs = inner(L2Element(fx::add(fx::mul(fx::constant(2), f.f()), h.f())), g);
    Enclosure rhs = Rat(2) * fg + inner(h, g);
    CHECK(abs(lhs.mid() - rhs.mid()) <= lhs.width() + rhs.width());
}

TEST_CASE("square-integrable but unbounded") {
    L2Element f = E("abs(x)^(-1/4)");
    CHECK(f.norm_sq().contains(4));  // 2 * int_0^1 x^(-1/2)
}

TEST_CASE("inequality suite") {
    InequalityReport eq = inequality_suite(E("x"), E("x"));
    CHECK(eq.all_pass());
    CHECK(eq.get("holder").equality);
    CHECK(eq.get("holder").lhs.contains(q(2, 3)));

    L2Element c = E("cos(pi*x)"), s = E("sin(pi*x)");
    InequalityReport py = inequality_suite(c, s, {c, s});
    CHECK(py.get("pythagorean").pass);
    CHECK(py.get("pythagorean").lhs.contains(2));

    InequalityReport strict = inequality_suite(E("x"), E("1"));
    CHECK(strict.all_pass());
    for (const char* name : {"holder", "cauchy_schwarz", "minkowski"}) {
        CAPTURE(name);
        CHECK(strict.get(name).residual > 0);
    }
    CHECK(strict.get("parallelogram").pass);

    // g = c f gives equality in Holder
    InequalityReport prop = inequality_suite(E("sin(3*x)"), E("-2*sin(3*x)"));
    CHECK(prop.get("holder").equality);
    CHECK(prop.all_pass());
}

TEST_CASE("pythagorean additivity over family members") {
    std::vector<L2Element> members{E("1/sqrt(2)"), E("cos(pi*x)"), E("sin(2*pi*x)"), E("cos(3*pi*x)")};
    InequalityReport r = inequality_suite(members[0], members[1], members);
    CHECK(r.get("pythagorean").pass);
    CHECK(r.get("pythagorean").rhs.contains(4));
}

TEST_CASE("fourier coefficients") {
    FourierOptions o;
    FourierCoeffs x = fourier_coeffs(E("x"), 6, o);
    CHECK(x.a0.contains(0));
    for (long n = 1; n <= 6; ++n) {
        CAPTURE(n);
        CHECK(x.a[n - 1].contains(0));
        // oracle: int x sin(n pi x) over [-1,1] = 2(-1)^(n+1)/(n pi)
        CHECK(brackets(x.b[n - 1], 2 * (n % 2 == 1 ? 1.0 : -1.0) / (n * M_PI)));
    }
    CHECK(x.max_width() <= o.tol);

    FourierCoeffs c = fourier_coeffs(E("3/2"), 4, o);
    CHECK(brackets(c.a0, 1.5 * std::sqrt(2.0)));
    for (long n = 1; n <= 4; ++n) CHECK((c.a[n - 1].contains(0) && c.b[n - 1].contains(0)));

    FourierCoeffs s = fourier_coeffs(E("sin(pi*x)"), 4, o);
    CHECK(s.b[0].contains(1));
    CHECK(s.a0.contains(0));
    for (long n = 2; n <= 4; ++n) CHECK(s.b[n - 1].contains(0));

    FourierOptions par = o;
    par.jobs = 3;
    FourierCoeffs xp = fourier_coeffs(E("x"), 6, par);
    for (long n = 0; n < 6; ++n) CHECK(xp.b[n] == x.b[n]);
}

TEST_CASE("partial sums") {
    FourierOptions o;
    FourierCoeffs c = fourier_coeffs(E("5"), 2, o);
    FuncExpr s0 = partial_sum(c, 0);
    RangeEnclosure v = range_enclosure(s0, l2_ambient());
    CHECK(v.lo.value() <= 5);
    CHECK(5 <= v.hi.value());
    CHECK(v.width() <= q(1, 1000000));

    FourierCoeffs s = fourier_coeffs(E("sin(pi*x)"), 1, o);
    L2Element diff(fx::sub(partial_sum(s, 1), F("sin(pi*x)")));
    CHECK(diff.norm_sq().hi <= 2 * kTol);

    FourierCoeffs x = fourier_coeffs(E("x"), 5, o);
    CHECK(partial_sum_perturbation(x, 5) <= 11 * o.tol);
    CHECK_THROWS_AS(partial_sum(x, 6), PreconditionError);

    // projection idempotence
    FourierCoeffs again = fourier_coeffs(L2Element(partial_sum(x, 5)), 5, o);
    for (long n = 0; n < 5; ++n) {
        CHECK(abs(again.b[n].mid() - x.b[n].mid()) <= 2 * (again.b[n].width() + x.b[n].width()) + o.tol);
        CHECK(again.a[n].contains(0));
    }
}

TEST_CASE("mean square error") {
    FourierOptions o;
    CHECK(mean_square_error(E("sin(pi*x)"), 2, o).contains(0));
    CHECK(mean_square_error(E("0"), 3, o) == Enclosure::exact(0));

    L2Element x = E("x");
    FourierCoeffs c = fourier_coeffs(x, 100, o);
    Enclosure e10 = mean_square_error(x, c, 10), e100 = mean_square_error(x, c, 100);
    CHECK(e100.hi < e10.lo);
    // tail oracle: |x - S_N|^2 = sum_{n>N} 4/(n^2 pi^2)
    auto tail = [](long n) {
        double s = 0;
        for (long k = 200000; k > n; --k) s += 4.0 / (double(k) * k * M_PI * M_PI);
        return std::sqrt(s + 4.0 / (M_PI * M_PI * 200000));
    };
    CHECK(brackets(e10, tail(10), 1e-6));
    CHECK(brackets(e100, tail(100), 1e-6));

    Enclosure prev = mean_square_error(x, c, 0);
    for (long n : {1, 2, 4, 8, 16}) {
        Enclosure e = mean_square_error(x, c, n);
        CHECK(e.lo <= prev.hi);
        prev = e;
    }
}

TEST_CASE("bessel and parseval") {
    FourierOptions o;
    BesselParseval x = bessel_parseval(E("x"), 50, o);
    CHECK(x.norm_sq.contains(q(2, 3)));
    Rat widths = x.norm_sq.width() + x.bessel_sum.width();
    CHECK(x.gap.lo >= -widths);
    // oracle: gap = sum_{n>50} 4/(n^2 pi^2) <= 4/(50 pi^2)
    CHECK(x.gap.hi <= parse_rat("0.0081") + widths);
    std::vector<Enclosure> sums = bessel_sums(x.coeffs);
    for (std::size_t i = 1; i < sums.size(); ++i) CHECK(sums[i - 1].lo <= sums[i].hi);
    for (const auto& s : sums) CHECK(s.lo <= x.norm_sq.hi);

    BesselParseval c3 = bessel_parseval(E("cos(3*pi*x)"), 4, o);
    CHECK(c3.bessel_sum.contains(1));
    CHECK(c3.gap.contains(0));

    BesselParseval z = bessel_parseval(E("0"), 3, o);
    CHECK(z.bessel_sum == Enclosure::exact(0));
    CHECK(z.gap == Enclosure::exact(0));
}

TEST_CASE("best approximation") {
    FourierOptions o;
    BestApproxReport r = best_approx_check(E("x"), 3, 50, 1, o);
    CHECK(r.all_pass());

    // f in the span: the best error is 0 and every perturbation is worse.
    BestApproxReport s = best_approx_check(E("cos(pi*x) - sin(2*pi*x)/2"), 2, 10, 2, o);
    CHECK(s.all_pass());
    CHECK(s.best.lo == 0);
    for (const auto& e : s.others) CHECK(e.hi > s.best.hi);

    // v = S_N itself
    L2Element x = E("x");
    FourierCoeffs c = fourier_coeffs(x, 3, o);
    L2Element diff(fx::sub(x.f(), partial_sum(c, 3)));
    Enclosure best = mean_square_error(x, c, 3);
    CHECK(abs(diff.norm().mid() - best.mid()) <= diff.norm().width() + best.width());
}

TEST_CASE("orthonormality audit") {
    OrthonormalityAudit a = orthonormality_audit(8);
    CHECK(a.pairs == 17 * 18 / 2);
    CHECK(a.pass(q(1, 100000000)));
}

TEST_CASE("csv output") {
    FourierCoeffs c = fourier_coeffs(E("x"), 2, {});
    std::ostringstream out;
    write_coeff_csv(out, c);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "n,A_lo,A_hi,A,B_lo,B_hi,B");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 3);

    std::ostringstream ps;
    write_partial_sum_csv(ps, E("x"), c, 2, 5);
    CHECK(ps.str().rfind("x,x_decimal,f,S_N\n-1,-1,-1,", 0) == 0);
}

TEST_CASE("step functions approximate in L2") {
    StepApprox s = step_approx(F("x^2"), q(1, 50), l2_ambient());
    std::vector<Branch> branches;
    const auto& xs = s.g.breakpoints();
    for (std::size_t i = 0; i + 1 < xs.size(); ++i)
        branches.push_back({set::literal(Interval{xs[i], xs[i + 1], true, i + 2 == xs.size()}, l2_ambient()),
                            fx::constant(s.g.values()[i])});
    L2Element diff(fx::sub(F("x^2"), fx::piecewise(branches)));
    // |f - g| < eps everywhere off a null set gives |f - g|_2 < eps sqrt(2)
    CHECK(diff.norm().hi < q(1, 50) * q(3, 2));
}
