#pragma once

#include "lk/core/enclosure.hpp"
#include "lk/core/interval_set.hpp"
#include "lk/expr/ast.hpp"
#include "lk/lebesgue/integral.hpp"
#include "lk/lebesgue/simple.hpp"
#include "lk/riemann/step.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lk {

// ---- absolute continuity --------------------------------------------------

struct AbsContinuityResult {
    Rat n;                // truncation level N
    Enclosure excess;     // integral of f - min(f, N), bounded above by eps/2
    Rat delta;            // strictly below eps / (2N)
    long trials = 0;
    long passed = 0;
    Rat worst;            // largest enclosure hi over the trial sets
    std::vector<IntervalSet> sets;
    std::vector<Enclosure> values;

    bool all_passed() const { return passed == trials; }
};

// Picks N from the truncation table so that the integral above N is below
// eps/2, sets delta < eps/(2N), then integrates f over `trials` random sets
// of measure < delta (some clustered near the left end). Throws
// PreconditionError unless f is certified integrable.
AbsContinuityResult abs_continuity_probe(const FuncExpr& f, const Rat& eps, long trials, std::uint64_t seed = 1,
                                         const NonnegOptions& opts = {});

// ---- density measures -----------------------------------------------------

struct DensityCheck {
    std::vector<Enclosure> parts;
    Enclosure sum;
    Enclosure whole;      // nu_f of the union
    Rat residual;         // |mid(whole) - mid(sum)|
    Rat allowance;        // width(whole) + width(sum)

    bool pass() const { return residual <= allowance; }
};

// Throws PreconditionError when the parts are not pairwise disjoint.
DensityCheck density_measure_check(const FuncExpr& f, const std::vector<IntervalSet>& parts,
                                   const IntegralOptions& opts = {});

// ---- convergence theorems -------------------------------------------------

enum class ConvergenceMode { bounded, monotone, dominated };
std::string to_string(ConvergenceMode m);

struct ConvergenceOptions {
    ConvergenceMode mode = ConvergenceMode::bounded;
    long n_min = 1;
    long n_max = 16;
    // Every index in [n_min, n_max] unless nonempty.
    std::vector<long> indices;
    // bounded: uniform bound M; defaults to the sup bound of the first member.
    std::optional<Rat> bound;
    // dominated: g with |f_n| <= g.
    FuncExpr dominator;
    // Pointwise limit supplied by the caller.
    FuncExpr limit;
    Rat tol = rat(1, 1000000);
    Interval ambient = unit_interval();
};

struct ConvergenceRow {
    long n = 0;
    Enclosure integral;
    ExtRat sup_abs;       // upper bound on sup |f_n|
    bool hypothesis = true;
};

struct ConvergenceReport {
    ConvergenceMode mode = ConvergenceMode::bounded;
    std::vector<ConvergenceRow> rows;
    std::optional<Rat> bound;
    // Raised when some row fails the mode's hypothesis check.
    bool hypothesis_flag = false;
    std::optional<Enclosure> limit_integral;
    // integral of f_last - integral of limit
    std::optional<Enclosure> gap;
    // Probe points where the last member is no farther from the limit than
    // the first; consistent when that holds at 7/8 of the evaluable probes.
    int probes_closer = 0;
    int probes_total = 0;
    bool probes_consistent = true;
    Rat probe_distance;   // largest |f_last - limit| bound over the probes
};

// `family` is a function template in `n`. Throws ParseError on a malformed
// template.
ConvergenceReport convergence_run(std::string_view family, const ConvergenceOptions& opts);

struct SeriesCheck {
    std::vector<Enclosure> terms;
    Enclosure partial;    // sum of the first N term integrals
    Enclosure limit;
    Enclosure residual;   // limit - partial
    Rat tail_bound;

    // The residual enclosure meets [-tail_bound, tail_bound].
    bool pass() const { return residual.lo <= tail_bound && -tail_bound <= residual.hi; }
};

// Terms u_1 .. u_N; each must be certified nonnegative.
SeriesCheck series_integral_check(std::string_view term, long n_terms, const FuncExpr& limit, const Rat& tail_bound,
                                  const IntegralOptions& opts = {});

// ---- approximation --------------------------------------------------------

struct RangePartition {
    SimpleFunction s;
    Rat error_bound;      // certified sup |f - s|
    Rat eps;              // band width (b - a)/n
    long unresolved = 0;  // cells that hit the depth limit
    bool domain_mode = false;
};

struct RangePartitionOptions {
    Interval ambient = unit_interval();
    long max_depth = 40;
    std::size_t max_cells = std::size_t{1} << 16;
};

// Bands [c_{i-1}, c_i) with c_i = a + i(b - a)/n over the global range [a, b];
// part i approximates the preimage of band i and carries the value c_i. When
// the cell budget runs out the construction switches to a uniform domain
// partition with range midpoints.
RangePartition range_partition(const FuncExpr& f, long n, const RangePartitionOptions& opts = {});

struct StepApprox {
    StepFunction g;
    IntervalSet exceptional;  // A, with measure < eps
    Rat max_error;            // certified sup |f - g| off A (and off breakpoints)
    long cells = 0;
};

// Step function g and set A with mu(A) < eps and |f - g| < eps off A. When f
// is bounded, g takes values inside the global range of f.
StepApprox step_approx(const FuncExpr& f, const Rat& eps, const Interval& ambient = unit_interval(),
                       long max_depth = 40);

}  // namespace lk
