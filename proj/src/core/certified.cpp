#include "lk/core/certified.hpp"

#include "lk/core/errors.hpp"

#include <mpfr.h>

#include <array>
#include <cmath>

namespace lk {

namespace {

// RAII wrapper over mpfr_t at the working precision.
class Mp {
public:
    Mp() { mpfr_init2(v_, kCertifiedPrecision); }
    ~Mp() { mpfr_clear(v_); }
    Mp(const Mp&) = delete;
    Mp& operator=(const Mp&) = delete;
    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }

    Rat to_rat() const {
        Rat q;
        mpfr_get_q(q.get_mpq_t(), v_);
        return q;
    }

private:
    mpfr_t v_;
};

bool perfect_square(const BigInt& n, BigInt& root) {
    if (mpz_perfect_square_p(n.get_mpz_t()) == 0) return false;
    mpz_sqrt(root.get_mpz_t(), n.get_mpz_t());
    return true;
}

// Lower and upper rounded values of sin or cos at x, with x itself rounded by
// input_rnd. Neighbouring cells share endpoints, so recent results are kept.
RatBounds trig_at(const Rat& x, bool is_cos, mpfr_rnd_t input_rnd) {
    struct Entry {
        Rat x;
        bool is_cos;
        mpfr_rnd_t rnd;
        RatBounds v;
    };
    thread_local std::array<Entry, 8> cache{};
    thread_local std::size_t next = 0;
    thread_local bool filled[8] = {};
    for (std::size_t i = 0; i < cache.size(); ++i)
        if (filled[i] && cache[i].is_cos == is_cos && cache[i].rnd == input_rnd && cache[i].x == x)
            return cache[i].v;

    if (sgn(x) == 0) return is_cos ? RatBounds{1, 1} : RatBounds{0, 0};
    Mp in, lo, hi;
    mpfr_set_q(in.get(), x.get_mpq_t(), input_rnd);
    // Correct rounding to nearest puts the exact value within one ulp step.
    if (is_cos)
        mpfr_cos(lo.get(), in.get(), MPFR_RNDN);
    else
        mpfr_sin(lo.get(), in.get(), MPFR_RNDN);
    mpfr_set(hi.get(), lo.get(), MPFR_RNDN);
    mpfr_nextbelow(lo.get());
    mpfr_nextabove(hi.get());
    RatBounds v{max(lo.to_rat(), Rat(-1)), min(hi.to_rat(), Rat(1))};

    cache[next] = {x, is_cos, input_rnd, v};
    filled[next] = true;
    next = (next + 1) % cache.size();
    return v;
}

// True when [a,b] is clearly away from every critical point, judged in doubles.
bool clear_of_critical(const Rat& a, const Rat& b, bool is_cos) {
    double da = a.get_d(), db = b.get_d();
    if (std::fabs(da) > 1e6 || std::fabs(db) > 1e6) return false;
    double h = is_cos ? 0.0 : 0.5;
    double ta = da / M_PI - h, tb = db / M_PI - h;
    return std::floor(ta - 1e-9) == std::floor(tb + 1e-9);
}

// Extremal values of sin/cos over [a,b], isotone in [a,b].
//
// Critical points are c_j = (j + h) * pi with h = 1/2 for sin and h = 0 for
// cos; even j is a maximum (+1), odd j a minimum (-1). Away from critical
// points the function is monotone and the extrema sit at the endpoints,
// which are rounded outward (a down, b up) before evaluation. Correctly
// rounded directed evaluation is monotone on monotone stretches, which is
// what makes the result isotone.
TrigRange trig_range(const Rat& a, const Rat& b, bool a_closed, bool b_closed, bool is_cos) {
    if (b < a) throw PreconditionError("trig range over an empty interval");
    const auto& pi = pi_bounds();
    TrigRange r;

    if (b - a > 2 * pi.hi) {
        r.lo = -1;
        r.hi = 1;
        r.lo_attained = r.hi_attained = true;
        return r;
    }

    const Rat h = is_cos ? Rat(0) : rat(1, 2);
    BigInt j_min = 0, j_max = -1;
    if (!clear_of_critical(a, b, is_cos)) {
        j_min = floor(min(a / pi.lo, a / pi.hi) - h) - 1;
        j_max = ceil(max(b / pi.lo, b / pi.hi) - h) + 1;
    }

    bool peak_possible = false, trough_possible = false;
    bool peak_inside = false, trough_inside = false;
    for (BigInt j = j_min; j <= j_max; ++j) {
        Rat k = Rat(j) + h;
        Rat c_lo, c_hi;
        if (sgn(k) >= 0) {
            c_lo = k * pi.lo;
            c_hi = k * pi.hi;
        } else {
            c_lo = k * pi.hi;
            c_hi = k * pi.lo;
        }
        bool possible = c_hi >= a && c_lo <= b;
        if (!possible) continue;
        bool inside;
        if (sgn(k) == 0) {
            // c = 0 exactly (cos only).
            inside = (a < 0 || (a == 0 && a_closed)) && (0 < b || (b == 0 && b_closed));
        } else {
            inside = a < c_lo && c_hi < b;
        }
        bool even = mpz_even_p(j.get_mpz_t()) != 0;
        if (even) {
            peak_possible = true;
            peak_inside = peak_inside || inside;
        } else {
            trough_possible = true;
            trough_inside = trough_inside || inside;
        }
    }

    RatBounds fa, fb;
    if (!peak_possible || !trough_possible) {
        fa = trig_at(a, is_cos, MPFR_RNDD);
        fb = trig_at(b, is_cos, MPFR_RNDU);
    }
    if (peak_possible) {
        r.hi = 1;
        r.hi_attained = peak_inside;
    } else {
        r.hi = max(fa.hi, fb.hi);
    }
    if (trough_possible) {
        r.lo = -1;
        r.lo_attained = trough_inside;
    } else {
        r.lo = min(fa.lo, fb.lo);
    }
    return r;
}

}  // namespace

const RatBounds& pi_bounds() {
    static const RatBounds bounds = [] {
        Mp lo, hi;
        mpfr_const_pi(lo.get(), MPFR_RNDD);
        mpfr_const_pi(hi.get(), MPFR_RNDU);
        RatBounds b{lo.to_rat(), hi.to_rat()};
        mpfr_free_cache();
        return b;
    }();
    return bounds;
}

RatBounds sqrt_bounds(const Rat& x) {
    if (sgn(x) < 0) throw EvalError("sqrt of a negative number");
    BigInt rn, rd;
    if (perfect_square(x.get_num(), rn) && perfect_square(x.get_den(), rd)) {
        Rat r = rat(rn, rd);
        return {r, r};
    }
    Mp in_lo, in_hi, lo, hi;
    mpfr_set_q(in_lo.get(), x.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(in_hi.get(), x.get_mpq_t(), MPFR_RNDU);
    mpfr_sqrt(lo.get(), in_lo.get(), MPFR_RNDD);
    mpfr_sqrt(hi.get(), in_hi.get(), MPFR_RNDU);
    return {lo.to_rat(), hi.to_rat()};
}

RatBounds rpow_bounds(const Rat& x, const Rat& r) {
    if (sgn(x) <= 0) throw PreconditionError("rational power of a nonpositive base");
    const BigInt& p = r.get_num();
    const BigInt& q = r.get_den();
    if (!q.fits_ulong_p() || !p.fits_slong_p())
        throw PreconditionError("exponent " + to_string(r) + " is too large");
    unsigned long qq = q.get_ui();
    long pp = p.get_si();

    BigInt rn, rd;
    if (mpz_root(rn.get_mpz_t(), x.get_num().get_mpz_t(), qq) != 0 &&
        mpz_root(rd.get_mpz_t(), x.get_den().get_mpz_t(), qq) != 0) {
        Rat v = pow(rat(rn, rd), pp);
        return {v, v};
    }

    // Bounds on x^(|p|/q); both steps are increasing in their argument.
    auto positive_power = [&](mpfr_rnd_t rnd) {
        Mp t;
        mpfr_set_q(t.get(), x.get_mpq_t(), rnd);
        mpfr_rootn_ui(t.get(), t.get(), qq, rnd);
        mpfr_pow_ui(t.get(), t.get(), static_cast<unsigned long>(pp < 0 ? -pp : pp), rnd);
        return t.to_rat();
    };
    Rat lo = positive_power(MPFR_RNDD);
    Rat hi = positive_power(MPFR_RNDU);
    if (pp > 0) return {lo, hi};
    // x^(-s) = 1 / x^s: exact rational reciprocals keep the bracket.
    return {1 / hi, 1 / lo};
}

TrigRange sin_range(const Rat& a, const Rat& b, bool a_closed, bool b_closed) {
    return trig_range(a, b, a_closed, b_closed, false);
}

TrigRange cos_range(const Rat& a, const Rat& b, bool a_closed, bool b_closed) {
    return trig_range(a, b, a_closed, b_closed, true);
}

}  // namespace lk
