#pragma once

#include "lk/core/enclosure.hpp"
#include "lk/core/interval_set.hpp"
#include "lk/expr/ast.hpp"
#include "lk/lebesgue/simple.hpp"

#include <string>
#include <utility>
#include <vector>

namespace lk {

struct IntegralOptions {
    Rat tol = rat(1, 1000000);
    Interval ambient = unit_interval();
    std::size_t max_cells = std::size_t{1} << 20;
};

struct IntegralResult {
    Enclosure value;
    bool at_tolerance = true;
    std::size_t cells = 0;
};

// Lebesgue: exact sum r_i mu(A_i). Dirac(x0): the value on the part holding
// x0. Density(g): sum r_i times an enclosure of the integral of g over A_i.
Enclosure simple_integral(const SimpleFunction& s, const Measure& m, const IntegralOptions& opts = {});

// Integral of a bounded function. Lebesgue measure integrates the
// almost-everywhere canonical form of f; Dirac evaluates f at x0 as written.
IntegralResult lebesgue_integral_bounded(const FuncExpr& f, const Measure& m, const IntegralOptions& opts = {});

// Integral of f times chi(E).
IntegralResult integrate_over(const FuncExpr& f, const IntervalSet& e, const Measure& m,
                              const IntegralOptions& opts = {});

// True when f >= 0 is certified on a dyadic partition of the domain, after
// almost-everywhere canonicalization.
bool certify_nonnegative(const FuncExpr& f, const IntervalSet& domain, long max_depth = 10);

enum class IntegrabilityKind { integrable, exceeded, not_certified };
std::string to_string(IntegrabilityKind k);

struct TruncationRow {
    Rat n;
    Enclosure integral;  // of min(f, n)
};

struct NonnegOptions {
    Rat tol = rat(1, 1000000);
    Rat divergence_bound = 1000000;
    Interval ambient = unit_interval();
    long max_doublings = 4096;
    // Cell budget for each truncation increment.
    std::size_t increment_cells = 256;
};

// Truncation path for f >= 0: integrates min(f, 1) and then the increments
// min(f, 2n) - min(f, n) over localized supersets of {f > n}, for n = 1, 2,
// 4, ... Stops once an increment is at most tol/2 and adds a geometric tail
// estimate, or reports `exceeded` once the certified lower bound passes the
// divergence bound. The tail estimate is extrapolated, not proved.
struct NonnegResult {
    IntegrabilityKind kind = IntegrabilityKind::not_certified;
    Enclosure value;        // with the tail estimate folded into hi
    Enclosure truncated;    // integral of the last truncation
    Rat tail;
    std::vector<TruncationRow> table;
    std::string note;
};

// Throws PreconditionError unless f is certified nonnegative on the domain.
NonnegResult lebesgue_integral_nonneg(const FuncExpr& f, const NonnegOptions& opts = {});
NonnegResult lebesgue_integral_nonneg(const FuncExpr& f, const IntervalSet& domain, const NonnegOptions& opts = {});

// Closed cells covering {g > n} inside `cells`, bisecting cells whose range
// straddles n within the given budgets.
std::vector<Interval> localize_above(const FuncExpr& g, const std::vector<Interval>& cells, const Rat& n,
                                     int max_evaluations = 96, std::size_t max_cells = 32);

// f+ = max(f, 0), f- = max(-f, 0).
std::pair<FuncExpr, FuncExpr> split_pos_neg(const FuncExpr& f);

struct GeneralResult {
    IntegrabilityKind kind = IntegrabilityKind::not_certified;
    Enclosure value;
    NonnegResult positive;
    NonnegResult negative;
};

GeneralResult lebesgue_integral_general(const FuncExpr& f, const NonnegOptions& opts = {});

// nu_g(A) = integral of g over A for a nonnegative density g. Null sets give
// exactly 0; unbounded densities go through the truncation path.
Enclosure density_measure(const FuncExpr& g, const IntervalSet& a, const IntegralOptions& opts = {});

}  // namespace lk
