#include "lk/core/rat.hpp"

#include "lk/core/errors.hpp"

#include <mpfr.h>

#include <cctype>
#include <cstdlib>

namespace lk {

Rat rat(long num, long den) {
    if (den == 0) throw PreconditionError("zero denominator");
    Rat q(num, den);
    q.canonicalize();
    return q;
}

Rat rat(const BigInt& num, const BigInt& den) {
    if (den == 0) throw PreconditionError("zero denominator");
    Rat q(num, den);
    q.canonicalize();
    return q;
}

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

BigInt parse_int(std::string_view s) {
    return BigInt(std::string(s), 10);
}

}  // namespace

Rat parse_rat(std::string_view text) {
    std::string_view s = text;
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    if (s.empty()) throw ParseError("malformed rational '" + std::string(text) + "'", 1);

    Rat result;
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        auto num = s.substr(0, slash);
        auto den = s.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den))
            throw ParseError("malformed rational '" + std::string(text) + "'", 1);
        BigInt d = parse_int(den);
        if (d == 0) throw ParseError("zero denominator in '" + std::string(text) + "'", slash + 2);
        result = rat(parse_int(num), d);
    } else {
        std::string_view mantissa = s;
        long exponent = 0;
        if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
            mantissa = s.substr(0, e);
            auto exp_text = std::string(s.substr(e + 1));
            std::size_t start = (!exp_text.empty() && (exp_text[0] == '-' || exp_text[0] == '+')) ? 1 : 0;
            if (!all_digits(std::string_view(exp_text).substr(start)) || exp_text.size() > 9)
                throw ParseError("malformed exponent in '" + std::string(text) + "'", e + 1);
            exponent = std::strtol(exp_text.c_str(), nullptr, 10);
        }
        std::string digits;
        long frac_digits = 0;
        if (auto dot = mantissa.find('.'); dot != std::string_view::npos) {
            auto ip = mantissa.substr(0, dot);
            auto fp = mantissa.substr(dot + 1);
            if ((!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)) ||
                (ip.empty() && fp.empty()))
                throw ParseError("malformed decimal '" + std::string(text) + "'", 1);
            digits = std::string(ip) + std::string(fp);
            frac_digits = static_cast<long>(fp.size());
        } else {
            if (!all_digits(mantissa))
                throw ParseError("malformed rational '" + std::string(text) + "'", 1);
            digits = std::string(mantissa);
        }
        result = Rat(parse_int(digits));
        long scale = exponent - frac_digits;
        BigInt ten_pow;
        mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
        if (scale < 0)
            result /= Rat(ten_pow);
        else
            result *= Rat(ten_pow);
        result.canonicalize();
    }
    return negative ? Rat(-result) : result;
}

std::string to_string(const Rat& q) {
    return q.get_str(10);
}

std::string to_decimal(const Rat& q, int digits) {
    mpfr_t x;
    mpfr_init2(x, 128);
    mpfr_set_q(x, q.get_mpq_t(), MPFR_RNDN);
    char* buf = nullptr;
    std::string fmt = "%." + std::to_string(digits) + "Rg";
    mpfr_asprintf(&buf, fmt.c_str(), x);
    std::string out(buf);
    mpfr_free_str(buf);
    mpfr_clear(x);
    return out;
}

double to_double(const Rat& q) {
    return q.get_d();
}

BigInt floor(const Rat& q) {
    BigInt r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

BigInt ceil(const Rat& q) {
    BigInt r;
    mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

Rat abs(const Rat& q) {
    return sgn(q) < 0 ? Rat(-q) : q;
}

Rat pow(const Rat& base, long exponent) {
    if (exponent < 0) {
        if (base == 0) throw EvalError("zero to a negative power");
        return pow(Rat(1 / base), -exponent);
    }
    BigInt n, d;
    mpz_pow_ui(n.get_mpz_t(), base.get_num_mpz_t(), static_cast<unsigned long>(exponent));
    mpz_pow_ui(d.get_mpz_t(), base.get_den_mpz_t(), static_cast<unsigned long>(exponent));
    return rat(n, d);
}

Rat pow2(long exponent) {
    BigInt p;
    mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
    return exponent < 0 ? rat(BigInt(1), p) : Rat(p);
}

Rat min(const Rat& a, const Rat& b) { return b < a ? b : a; }
Rat max(const Rat& a, const Rat& b) { return a < b ? b : a; }

Rat midpoint(const Rat& a, const Rat& b) {
    Rat m = (a + b) / 2;
    m.canonicalize();
    return m;
}

Rat dyadic_floor(const Rat& q, long bits) {
    Rat scale = pow2(bits);
    return Rat(floor(q * scale)) / scale;
}

Rat dyadic_ceil(const Rat& q, long bits) {
    Rat scale = pow2(bits);
    return Rat(ceil(q * scale)) / scale;
}

const Rat& ExtRat::value() const {
    if (kind_ != Kind::finite) throw UnboundedError("value of an infinite extended rational");
    return value_;
}

int ExtRat::sign() const {
    if (kind_ == Kind::pos_inf) return 1;
    if (kind_ == Kind::neg_inf) return -1;
    return sgn(value_);
}

bool operator==(const ExtRat& a, const ExtRat& b) {
    if (a.kind_ != b.kind_) return false;
    return a.kind_ != ExtRat::Kind::finite || a.value_ == b.value_;
}

std::strong_ordering operator<=>(const ExtRat& a, const ExtRat& b) {
    if (a.kind_ != b.kind_) return static_cast<int>(a.kind_) <=> static_cast<int>(b.kind_);
    if (a.kind_ != ExtRat::Kind::finite) return std::strong_ordering::equal;
    int c = cmp(a.value_, b.value_);
    return c <=> 0;
}

ExtRat operator-(const ExtRat& a) {
    if (a.is_pos_inf()) return ExtRat::neg_inf();
    if (a.is_neg_inf()) return ExtRat::pos_inf();
    return ExtRat(Rat(-a.value()));
}

std::string to_string(const ExtRat& q) {
    if (q.is_pos_inf()) return "inf";
    if (q.is_neg_inf()) return "-inf";
    return to_string(q.value());
}

}  // namespace lk
