#pragma once

#include "lk/core/enclosure.hpp"
#include "lk/expr/ast.hpp"
#include "lk/riemann/step.hpp"

#include <string>
#include <vector>

namespace lk {

struct UpperLower {
    StepFunction u;  // enclosure hi on each cell: u >= f off breakpoints
    StepFunction v;  // enclosure lo on each cell: v <= f off breakpoints
};

// Throws UnboundedError when f is unbounded (or undefined) on some cell.
UpperLower upper_lower_step(const FuncExpr& f, const std::vector<Rat>& partition);

struct RiemannBounds {
    Rat lower;
    Rat upper;
    long depth = 0;
    std::size_t cells = 0;
    Rat gap() const { return upper - lower; }
};

// Dyadic cells of [0,1] down to level `depth`; a cell is split only while its
// enclosure gap is positive. lower is nondecreasing and upper nonincreasing
// in depth.
RiemannBounds riemann_bounds(const FuncExpr& f, long depth);

enum class RiemannVerdictKind { integrable, not_certified, non_integrable };

std::string to_string(RiemannVerdictKind k);

struct RiemannVerdict {
    RiemannVerdictKind kind = RiemannVerdictKind::not_certified;
    Rat lower;             // best lower step integral found
    Rat upper;             // best upper step integral found
    Rat witness_gap;       // non_integrable: every upper minus lower is >= this
    long depth = 0;        // deepest dyadic level used
    std::size_t cells = 0;
    std::string note;
    Enclosure enclosure() const { return {lower, upper}; }
};

struct RiemannOptions {
    long max_depth = 24;
    std::size_t max_cells = 1u << 22;
};

// Adaptive refinement: repeatedly split the cell with the largest
// width * (hi - lo), leftmost on ties, until the total gap is <= eps.
RiemannVerdict riemann_integrable(const FuncExpr& f, const Rat& eps, const RiemannOptions& opts = {});

// Lower bound on upper - lower over every pair of step functions u >= f >= v,
// from the rational/irrational split of dirichlet nodes. Zero when f has no
// dirichlet node or the split cannot be certified.
Rat dirichlet_gap_witness(const FuncExpr& f, long depth = 10);

struct RegulatedStep {
    StepFunction step;
    Rat delta;  // sup |f - step| <= delta on the domain
};

// Left-endpoint sampling on n uniform cells of [a, b]. Throws UnboundedError
// when f is not bounded on some cell.
RegulatedStep regulated_from_continuous(const FuncExpr& f, long n_cells, const Rat& a = 0,
                                        const Rat& b = 1);

struct RegulatedResult {
    Enclosure enclosure;
    long n_cells = 0;
    Rat delta;
};

// Doubles the cell count until 2 * delta * (b - a) <= eps.
RegulatedResult regulated_integral(const FuncExpr& f, const Rat& eps, const Rat& a = 0,
                                   const Rat& b = 1, long max_cells = 1L << 20);

struct FtcProbe {
    Rat x;
    Rat residual;  // certified upper bound on |(F(x+h) - F(x))/h - f(x)|
};

struct FtcReport {
    Rat h;
    Rat max_residual;
    std::vector<FtcProbe> probes;
    std::size_t skipped = 0;  // probes with x + h beyond the domain
};

// Probes x_k = k / probes, k = 0..probes-1.
FtcReport ftc_check(const FuncExpr& f, const Rat& h, long probes);

}  // namespace lk
