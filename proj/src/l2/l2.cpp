#include "lk/l2/l2.hpp"

#include "lk/core/errors.hpp"
#include "lk/expr/range.hpp"
#include "lk/lebesgue/integral.hpp"

#include <exception>
#include <random>
#include <stdexcept>
#include <thread>

namespace lk {

const Interval& l2_ambient() {
    static const Interval amb = Interval::closed(-1, 1);
    return amb;
}

Enclosure integral_l2(const FuncExpr& h, const Rat& tol) {
    IntegralOptions io;
    io.tol = tol;
    io.ambient = l2_ambient();
    try {
        return lebesgue_integral_bounded(h, Measure::lebesgue(), io).value;
    } catch (const UnboundedError&) {
    }
    NonnegOptions no;
    no.tol = tol;
    no.ambient = l2_ambient();
    GeneralResult r = lebesgue_integral_general(h, no);
    if (r.kind != IntegrabilityKind::integrable) throw NotCertifiedError("integral over [-1,1] not certified: " + to_string(r.kind));
    return r.value;
}

namespace {

Enclosure nonneg(Enclosure e) {
    if (sgn(e.lo) < 0) e.lo = 0;
    return e;
}

Enclosure inv_sqrt2() {
    static const Enclosure v = [] {
        Enclosure s = sqrt(Enclosure::exact(2));
        return Enclosure{1 / s.hi, 1 / s.lo};
    }();
    return v;
}

}  // namespace

L2Element::L2Element(const FuncExpr& f, const Rat& tol) : f_(ae_canonicalize(f, l2_ambient())) {
    norm_sq_ = nonneg(integral_l2(fx::mul(f_, f_), tol));
}

Enclosure inner(const L2Element& f, const L2Element& g, const Rat& tol) {
    return integral_l2(fx::mul(f.f(), g.f()), tol);
}

Enclosure norm(const L2Element& f) { return f.norm(); }

bool InequalityReport::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

const InequalityCheck& InequalityReport::get(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return c;
    throw std::out_of_range("no check named " + name);
}

namespace {

InequalityCheck le_check(std::string name, const Enclosure& lhs, const Enclosure& rhs) {
    InequalityCheck c{std::move(name), lhs, rhs, rhs.lo - lhs.hi, lhs.width() + rhs.width(), false, false};
    c.pass = c.residual >= -c.allowance;
    c.equality = abs(rhs.mid() - lhs.mid()) <= c.allowance;
    return c;
}

InequalityCheck eq_check(std::string name, const Enclosure& lhs, const Enclosure& rhs) {
    InequalityCheck c{std::move(name), lhs, rhs, -abs(rhs.mid() - lhs.mid()), lhs.width() + rhs.width(), false, false};
    c.pass = c.equality = c.residual >= -c.allowance;
    return c;
}

}  // namespace

InequalityReport inequality_suite(const L2Element& f, const L2Element& g, const std::vector<L2Element>& orthogonal,
                                  const Rat& tol) {
    InequalityReport rep;
    Enclosure nf = f.norm(), ng = g.norm();
    Enclosure prod = nf * ng;
    rep.checks.push_back(le_check("holder", nonneg(integral_l2(fx::abs(fx::mul(f.f(), g.f())), tol)), prod));
    Enclosure ip = inner(f, g, tol);
    Enclosure abs_ip{sgn(ip.lo) <= 0 && sgn(ip.hi) >= 0 ? Rat(0) : min(abs(ip.lo), abs(ip.hi)), magnitude(ip)};
    rep.checks.push_back(le_check("cauchy_schwarz", abs_ip, prod));
    L2Element sum(fx::add(f.f(), g.f()), tol), diff(fx::sub(f.f(), g.f()), tol);
    rep.checks.push_back(le_check("minkowski", sum.norm(), nf + ng));
    rep.checks.push_back(eq_check("parallelogram", sum.norm_sq() + diff.norm_sq(),
                                  Rat(2) * f.norm_sq() + Rat(2) * g.norm_sq()));
    if (!orthogonal.empty()) {
        FuncExpr total = orthogonal.front().f();
        Enclosure parts = orthogonal.front().norm_sq();
        for (std::size_t i = 1; i < orthogonal.size(); ++i) {
            total = fx::add(total, orthogonal[i].f());
            parts = parts + orthogonal[i].norm_sq();
        }
        rep.checks.push_back(eq_check("pythagorean", L2Element(total, tol).norm_sq(), parts));
    }
    return rep;
}

FuncExpr trig_member(const TrigIndex& u) {
    if (u.kind == TrigKind::constant) return fx::div(fx::constant(1), fx::sqrt(fx::constant(2)));
    FuncExpr arg = fx::mul(fx::pi(), fx::x());
    if (u.n != 1) arg = fx::mul(fx::constant(u.n), arg);
    return u.kind == TrigKind::cos ? fx::cos(arg) : fx::sin(arg);
}

std::string to_string(const TrigIndex& u) {
    switch (u.kind) {
        case TrigKind::constant: return "1/sqrt(2)";
        case TrigKind::cos: return "cos(" + std::to_string(u.n) + "*pi*x)";
        case TrigKind::sin: return "sin(" + std::to_string(u.n) + "*pi*x)";
    }
    return "";
}

Rat FourierCoeffs::max_width() const {
    Rat w = a0.width();
    for (const auto& e : a) w = max(w, e.width());
    for (const auto& e : b) w = max(w, e.width());
    return w;
}

FourierCoeffs fourier_coeffs(const L2Element& f, long n, const FourierOptions& opts) {
    if (n < 0) throw PreconditionError("N must be nonnegative");
    FourierCoeffs c;
    c.tol = opts.tol;
    c.a.resize(n);
    c.b.resize(n);
    long tasks = 2 * n + 1;
    auto run = [&](long k) {
        if (k == 0) {
            c.a0 = inv_sqrt2() * integral_l2(f.f(), opts.tol / 2);
            return;
        }
        long m = (k + 1) / 2;
        TrigIndex u{k % 2 == 1 ? TrigKind::cos : TrigKind::sin, m};
        Enclosure v = integral_l2(fx::mul(f.f(), trig_member(u)), opts.tol);
        (u.kind == TrigKind::cos ? c.a : c.b)[m - 1] = v;
    };
    unsigned jobs = std::max(1u, std::min<unsigned>(opts.jobs, static_cast<unsigned>(tasks)));
    if (jobs == 1) {
        for (long k = 0; k < tasks; ++k) run(k);
        return c;
    }
    std::vector<std::exception_ptr> errors(jobs);
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j)
        pool.emplace_back([&, j] {
            try {
                for (long k = j; k < tasks; k += jobs) run(k);
            } catch (...) {
                errors[j] = std::current_exception();
            }
        });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return c;
}

namespace {

bool usable(const Enclosure& e) { return !e.contains(0); }

FuncExpr balanced_sum(std::vector<FuncExpr> terms) {
    if (terms.empty()) return fx::constant(0);
    while (terms.size() > 1) {
        std::vector<FuncExpr> next;
        for (std::size_t i = 0; i + 1 < terms.size(); i += 2) next.push_back(fx::add(terms[i], terms[i + 1]));
        if (terms.size() % 2 == 1) next.push_back(terms.back());
        terms = std::move(next);
    }
    return terms.front();
}

Rat deviation(const Enclosure& e) { return usable(e) ? e.width() / 2 : magnitude(e); }

void check_order(const FourierCoeffs& c, long n) {
    if (n < 0 || n > c.size()) throw PreconditionError("N exceeds the available coefficients");
}

}  // namespace

FuncExpr partial_sum(const FourierCoeffs& c, long n) {
    check_order(c, n);
    std::vector<FuncExpr> terms;
    auto add = [&](const Enclosure& e, const TrigIndex& u) {
        if (usable(e)) terms.push_back(fx::mul(fx::constant(e.mid()), trig_member(u)));
    };
    add(c.a0, {TrigKind::constant, 0});
    for (long k = 1; k <= n; ++k) {
        add(c.a[k - 1], {TrigKind::cos, k});
        add(c.b[k - 1], {TrigKind::sin, k});
    }
    return balanced_sum(std::move(terms));
}

Rat partial_sum_perturbation(const FourierCoeffs& c, long n) {
    check_order(c, n);
    Rat d = deviation(c.a0);
    for (long k = 1; k <= n; ++k) d += deviation(c.a[k - 1]) + deviation(c.b[k - 1]);
    return d;
}

Enclosure mean_square_error(const L2Element& f, const FourierCoeffs& c, long n, const Rat& tol) {
    FuncExpr h = fx::sub(f.f(), partial_sum(c, n));
    Enclosure e = sqrt(nonneg(integral_l2(fx::mul(h, h), tol)));
    Rat d = partial_sum_perturbation(c, n);
    return {max(Rat(e.lo - d), Rat(0)), e.hi + d};
}

Enclosure mean_square_error(const L2Element& f, long n, const FourierOptions& opts) {
    return mean_square_error(f, fourier_coeffs(f, n, opts), n, opts.tol);
}

std::vector<Enclosure> bessel_sums(const FourierCoeffs& c) {
    std::vector<Enclosure> out{square(c.a0)};
    for (long k = 0; k < c.size(); ++k) out.push_back(out.back() + square(c.a[k]) + square(c.b[k]));
    return out;
}

BesselParseval bessel_parseval(const L2Element& f, long n, const FourierOptions& opts) {
    BesselParseval r;
    r.coeffs = fourier_coeffs(f, n, opts);
    r.bessel_sum = bessel_sums(r.coeffs).back();
    r.norm_sq = f.norm_sq();
    r.gap = r.norm_sq - r.bessel_sum;
    return r;
}

BestApproxReport best_approx_check(const L2Element& f, long n, long trials, std::uint64_t seed,
                                   const FourierOptions& opts) {
    FourierCoeffs c = fourier_coeffs(f, n, opts);
    BestApproxReport rep;
    rep.best = mean_square_error(f, c, n, opts.tol);
    std::mt19937_64 rng(seed);
    auto perturb = [&](const Enclosure& e) -> Enclosure {
        Rat d = rat(static_cast<long>(rng() % 17) - 8, 64);
        return Enclosure::exact((usable(e) ? e.mid() : Rat(0)) + d);
    };
    for (long t = 0; t < trials; ++t) {
        FourierCoeffs v = c;
        v.a0 = perturb(c.a0);
        for (long k = 0; k < n; ++k) {
            v.a[k] = perturb(c.a[k]);
            v.b[k] = perturb(c.b[k]);
        }
        FuncExpr h = fx::sub(f.f(), partial_sum(v, n));
        Enclosure other = sqrt(nonneg(integral_l2(fx::mul(h, h), opts.tol)));
        if (rep.best.hi <= other.lo + rep.best.width() + other.width()) ++rep.passed;
        rep.others.push_back(other);
    }
    return rep;
}

OrthonormalityAudit orthonormality_audit(long max_index, const Rat& tol) {
    std::vector<TrigIndex> family{{TrigKind::constant, 0}};
    for (long k = 1; k <= max_index; ++k) {
        family.push_back({TrigKind::cos, k});
        family.push_back({TrigKind::sin, k});
    }
    OrthonormalityAudit audit;
    audit.max_deviation = 0;
    for (std::size_t i = 0; i < family.size(); ++i)
        for (std::size_t j = i; j < family.size(); ++j) {
            Enclosure e = integral_l2(fx::mul(trig_member(family[i]), trig_member(family[j])), tol);
            Rat delta = i == j ? 1 : 0;
            Rat dev = max(abs(e.lo - delta), abs(e.hi - delta));
            ++audit.pairs;
            if (dev > audit.max_deviation || audit.pairs == 1) {
                audit.max_deviation = dev;
                audit.worst_i = family[i];
                audit.worst_j = family[j];
            }
        }
    return audit;
}

namespace {

std::string dec(const Rat& q) { return to_decimal(q, 12); }

std::string value_str(const FuncExpr& f, const Rat& x) {
    try {
        RangeEnclosure r = eval_func(f, x, EvalOptions{true});
        if (!r.bounded()) return r.lo.is_pos_inf() || r.hi.is_pos_inf() ? "inf" : "-inf";
        return dec(r.finite().mid());
    } catch (const EvalError&) {
        return "nan";
    }
}

}  // namespace

void write_coeff_csv(std::ostream& out, const FourierCoeffs& c) {
    out << "n,A_lo,A_hi,A,B_lo,B_hi,B\n";
    out << "0," << to_string(c.a0.lo) << ',' << to_string(c.a0.hi) << ',' << dec(c.a0.mid()) << ",0,0,0\n";
    for (long k = 0; k < c.size(); ++k)
        out << k + 1 << ',' << to_string(c.a[k].lo) << ',' << to_string(c.a[k].hi) << ',' << dec(c.a[k].mid()) << ','
            << to_string(c.b[k].lo) << ',' << to_string(c.b[k].hi) << ',' << dec(c.b[k].mid()) << '\n';
}

void write_partial_sum_csv(std::ostream& out, const L2Element& f, const FourierCoeffs& c, long n, long points) {
    if (points < 2) throw PreconditionError("need at least two grid points");
    FuncExpr s = partial_sum(c, n);
    out << "x,x_decimal,f,S_N\n";
    for (long i = 0; i < points; ++i) {
        Rat x = Rat(-1) + rat(2 * i, points - 1);
        out << to_string(x) << ',' << dec(x) << ',' << value_str(f.f(), x) << ',' << value_str(s, x) << '\n';
    }
}

}  // namespace lk
