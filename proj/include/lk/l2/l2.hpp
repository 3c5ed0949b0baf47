#pragma once

#include "lk/core/enclosure.hpp"
#include "lk/core/interval_set.hpp"
#include "lk/expr/ast.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace lk {

// [-1, 1]
const Interval& l2_ambient();

// A square-integrable function on [-1, 1], held in almost-everywhere
// canonical form together with an enclosure of its squared norm.
class L2Element {
public:
    // Throws NotCertifiedError when the integral of f^2 is not certified finite.
    explicit L2Element(const FuncExpr& f, const Rat& tol = rat(1, 1000000000));

    const FuncExpr& f() const noexcept { return f_; }
    const Enclosure& norm_sq() const noexcept { return norm_sq_; }
    Enclosure norm() const { return sqrt(norm_sq_); }

private:
    FuncExpr f_;
    Enclosure norm_sq_;
};

// Integral over [-1, 1]; bounded integrands go through quadrature, others
// through the truncation path of f+ and f-.
Enclosure integral_l2(const FuncExpr& h, const Rat& tol);

Enclosure inner(const L2Element& f, const L2Element& g, const Rat& tol = rat(1, 1000000000));
Enclosure norm(const L2Element& f);

// ---- inequalities ---------------------------------------------------------

struct InequalityCheck {
    std::string name;
    Enclosure lhs;
    Enclosure rhs;
    Rat residual;      // rhs.lo - lhs.hi for inequalities
    Rat allowance;     // combined widths
    bool pass = false;
    bool equality = false;  // lhs and rhs agree within the allowance
};

struct InequalityReport {
    std::vector<InequalityCheck> checks;
    bool all_pass() const;
    const InequalityCheck& get(const std::string& name) const;
};

// Holder (int |fg| <= |f||g|), Cauchy-Schwarz (|<f,g>| <= |f||g|),
// Minkowski, the parallelogram law, and, when `orthogonal` is nonempty, the
// Pythagorean identity for that family.
InequalityReport inequality_suite(const L2Element& f, const L2Element& g,
                                  const std::vector<L2Element>& orthogonal = {}, const Rat& tol = rat(1, 1000000000));

// ---- trigonometric family -------------------------------------------------

// u_0 = 1/sqrt(2), then cos(n pi x) and sin(n pi x).
enum class TrigKind { constant, cos, sin };
struct TrigIndex {
    TrigKind kind = TrigKind::constant;
    long n = 0;
};
FuncExpr trig_member(const TrigIndex& u);
std::string to_string(const TrigIndex& u);

struct FourierCoeffs {
    Enclosure a0;
    std::vector<Enclosure> a;  // A_1 .. A_N
    std::vector<Enclosure> b;  // B_1 .. B_N
    Rat tol;

    long size() const { return static_cast<long>(a.size()); }
    Rat max_width() const;
};

struct FourierOptions {
    Rat tol = rat(1, 100000000);
    unsigned jobs = 1;
};

FourierCoeffs fourier_coeffs(const L2Element& f, long n, const FourierOptions& opts = {});

// S_N with enclosure midpoints as scalars; coefficients whose enclosure holds
// 0 contribute nothing.
FuncExpr partial_sum(const FourierCoeffs& c, long n);
// Upper bound on |S_N - S_N(exact coefficients)|, by Minkowski over the
// orthonormal family.
Rat partial_sum_perturbation(const FourierCoeffs& c, long n);

// |f - S_N|, widened by the partial-sum perturbation.
Enclosure mean_square_error(const L2Element& f, const FourierCoeffs& c, long n, const Rat& tol = rat(1, 1000000000));
Enclosure mean_square_error(const L2Element& f, long n, const FourierOptions& opts = {});

struct BesselParseval {
    FourierCoeffs coeffs;
    Enclosure bessel_sum;
    Enclosure norm_sq;
    Enclosure gap;  // norm_sq - bessel_sum
};

BesselParseval bessel_parseval(const L2Element& f, long n, const FourierOptions& opts = {});
// Partial Bessel sums for N = 0 .. size().
std::vector<Enclosure> bessel_sums(const FourierCoeffs& c);

struct BestApproxReport {
    Enclosure best;                 // |f - S_N|
    std::vector<Enclosure> others;  // |f - v| for the perturbed v
    long passed = 0;
    bool all_pass() const { return passed == static_cast<long>(others.size()); }
};

// Compares S_N with `trials` random perturbations of its coefficients.
BestApproxReport best_approx_check(const L2Element& f, long n, long trials, std::uint64_t seed = 1,
                                   const FourierOptions& opts = {});

struct OrthonormalityAudit {
    long pairs = 0;
    Rat max_deviation;  // max |<u_i, u_j> - delta_ij| over the enclosures
    TrigIndex worst_i, worst_j;
    bool pass(const Rat& tol) const { return max_deviation <= tol; }
};

// All pairs of family members with index <= max_index.
OrthonormalityAudit orthonormality_audit(long max_index, const Rat& tol = rat(1, 10000000000));

// ---- CSV ------------------------------------------------------------------

// n,A_lo,A_hi,A,B_lo,B_hi,B: exact bounds and a 12-digit midpoint; row 0 holds A_0.
void write_coeff_csv(std::ostream& out, const FourierCoeffs& c);
// x,x_decimal,f(x),S_N(x) on a uniform grid of `points` >= 2 points over [-1, 1].
void write_partial_sum_csv(std::ostream& out, const L2Element& f, const FourierCoeffs& c, long n, long points);

}  // namespace lk
