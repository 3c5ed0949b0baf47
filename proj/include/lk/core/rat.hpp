#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace lk {

// Arbitrary-precision rational, always in lowest terms with positive
// denominator (GMP canonicalizes after every operation).
using Rat = mpq_class;
using BigInt = mpz_class;

Rat rat(long num, long den = 1);
Rat rat(const BigInt& num, const BigInt& den);

// Accepts "-?INT", "INT/INT", "-?D.DDD" and an optional exponent "e[+-]INT".
Rat parse_rat(std::string_view text);

// "p/q", or "p" when q == 1.
std::string to_string(const Rat& q);
// Decimal rendering with `digits` significant digits (plots and CSV only).
std::string to_decimal(const Rat& q, int digits = 12);

double to_double(const Rat& q);
BigInt floor(const Rat& q);
BigInt ceil(const Rat& q);
Rat abs(const Rat& q);
Rat pow(const Rat& base, long exponent);
Rat pow2(long exponent);
Rat min(const Rat& a, const Rat& b);
Rat max(const Rat& a, const Rat& b);
Rat midpoint(const Rat& a, const Rat& b);

// Largest multiple of 2^-bits that is <= q (resp. smallest >= q).
Rat dyadic_floor(const Rat& q, long bits);
Rat dyadic_ceil(const Rat& q, long bits);

// Extended rational: finite value or +-infinity. Used by range enclosures,
// where division by zero and singularities produce unbounded values.
class ExtRat {
public:
    enum class Kind : std::int8_t { neg_inf = -1, finite = 0, pos_inf = 1 };

    ExtRat() = default;
    ExtRat(const Rat& v) : kind_(Kind::finite), value_(v) {}  // NOLINT: implicit by intent
    ExtRat(long v) : kind_(Kind::finite), value_(v) {}        // NOLINT

    static ExtRat pos_inf() { return ExtRat(Kind::pos_inf); }
    static ExtRat neg_inf() { return ExtRat(Kind::neg_inf); }

    Kind kind() const noexcept { return kind_; }
    bool finite() const noexcept { return kind_ == Kind::finite; }
    bool is_pos_inf() const noexcept { return kind_ == Kind::pos_inf; }
    bool is_neg_inf() const noexcept { return kind_ == Kind::neg_inf; }
    // Precondition: finite().
    const Rat& value() const;
    int sign() const;

    friend bool operator==(const ExtRat& a, const ExtRat& b);
    friend std::strong_ordering operator<=>(const ExtRat& a, const ExtRat& b);

private:
    explicit ExtRat(Kind k) : kind_(k) {}
    Kind kind_ = Kind::finite;
    Rat value_;
};

ExtRat operator-(const ExtRat& a);
std::string to_string(const ExtRat& q);

}  // namespace lk
