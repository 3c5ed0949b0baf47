#pragma once

#include "lk/core/enclosure.hpp"
#include "lk/core/interval_set.hpp"
#include "lk/expr/ast.hpp"

#include <optional>
#include <vector>

namespace lk {

// Validated integration of an expression over finitely many intervals.
//
// The domain is cut at structural breakpoints; on each piece the expression is
// specialized (indicators and piecewise nodes resolved), constant pieces and
// polynomials with rational coefficients are integrated exactly, and the rest
// goes through adaptive bisection. A cell is enclosed by an order-K interval
// Taylor model when one exists and otherwise by width times the rational
// range enclosure. The cell with the widest enclosure is split next.
struct QuadOptions {
    Rat tol = rat(1, 1000000);
    // Also stop once the width is at most rel_tol * |value|.
    Rat rel_tol = 0;
    std::size_t max_cells = std::size_t{1} << 20;
};

struct QuadResult {
    Enclosure value;
    bool at_tolerance = false;
    std::size_t cells = 0;
};

// Integrates f literally (no almost-everywhere simplification) over the union
// of `domain`. Throws UnboundedError when f cannot be bounded on a cell that
// has already been split to negligible width.
QuadResult integrate(const FuncExpr& f, const std::vector<Interval>& domain, const QuadOptions& opts = {});
QuadResult integrate(const FuncExpr& f, const Rat& a, const Rat& b, const QuadOptions& opts = {});

// Folds constant subexpressions; used before tape compilation.
FuncExpr fold_constants(const FuncExpr& f);

// Coefficients c_0..c_d when f is a polynomial in x with rational coefficients.
std::optional<std::vector<Rat>> as_polynomial(const FuncExpr& f, long max_degree = 64);

// Order of the interval Taylor models (even).
inline constexpr int kTaylorOrder = 10;

// Enclosure of the integral of f over [a, b] from one Taylor model, or
// nullopt when some node has no valid expansion on the cell.
std::optional<Enclosure> taylor_cell_integral(const FuncExpr& f, const Rat& a, const Rat& b);

}  // namespace lk
