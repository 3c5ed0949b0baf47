#pragma once

#include "lk/core/interval_set.hpp"

#include <memory>
#include <string>
#include <vector>

namespace lk {

// ---- set expressions ------------------------------------------------------

enum class SetOp { literal, empty, whole, cantor, unite, meet, minus, complement, shift };

struct SetNode;
using SetExpr = std::shared_ptr<const SetNode>;

struct SetNode {
    SetOp op;
    Interval literal;            // literal
    long level = 0;              // cantor
    Rat offset;                  // shift
    Interval ambient;            // whole, complement
    std::vector<SetExpr> args;
    IntervalSet value;           // evaluated once at construction
};

namespace set {
SetExpr literal(const Interval& i, const Interval& ambient = unit_interval());
SetExpr empty();
SetExpr whole(const Interval& ambient = unit_interval());
SetExpr cantor(long n);
SetExpr unite(SetExpr a, SetExpr b);
SetExpr meet(SetExpr a, SetExpr b);
SetExpr minus(SetExpr a, SetExpr b, const Interval& ambient = unit_interval());
SetExpr complement(SetExpr a, const Interval& ambient = unit_interval());
SetExpr shift(SetExpr a, const Rat& c, const Interval& ambient = unit_interval());
}  // namespace set

inline const IntervalSet& eval_set(const SetExpr& e) { return e->value; }
bool equal(const SetExpr& a, const SetExpr& b);

// ---- function expressions -------------------------------------------------

enum class Op {
    constant, pi, var,
    add, sub, mul, div, neg,
    pow,   // integer exponent k >= 0
    rpow,  // rational exponent, base >= 0
    sin, cos, sqrt, abs, min, max,
    indicator, dirichlet, piecewise,
};

struct FuncNode;
using FuncExpr = std::shared_ptr<const FuncNode>;

struct Branch {
    SetExpr set;
    FuncExpr f;
};

struct FuncNode {
    Op op = Op::constant;
    Rat a;                       // constant value; rpow exponent; dirichlet rational value
    Rat b;                       // dirichlet irrational value
    long k = 0;                  // pow exponent
    std::vector<FuncExpr> args;
    SetExpr set;                 // indicator
    std::vector<Branch> branches;  // piecewise, pairwise disjoint sets
};

namespace fx {
FuncExpr constant(const Rat& q);
FuncExpr pi();
FuncExpr x();
FuncExpr add(FuncExpr a, FuncExpr b);
FuncExpr sub(FuncExpr a, FuncExpr b);
FuncExpr mul(FuncExpr a, FuncExpr b);
FuncExpr div(FuncExpr a, FuncExpr b);
FuncExpr neg(FuncExpr a);
FuncExpr pow(FuncExpr a, long k);
FuncExpr rpow(FuncExpr a, const Rat& r);
FuncExpr sin(FuncExpr a);
FuncExpr cos(FuncExpr a);
FuncExpr sqrt(FuncExpr a);
FuncExpr abs(FuncExpr a);
FuncExpr min(FuncExpr a, FuncExpr b);
FuncExpr max(FuncExpr a, FuncExpr b);
FuncExpr indicator(SetExpr s);
FuncExpr dirichlet(const Rat& on_rationals, const Rat& on_irrationals);
// Throws PreconditionError when two branch sets intersect.
FuncExpr piecewise(std::vector<Branch> branches);
}  // namespace fx

bool equal(const FuncExpr& a, const FuncExpr& b);

bool is_constant(const FuncExpr& f);
bool contains_op(const FuncExpr& f, Op op);

// Endpoints of every indicator / piecewise set, sorted and deduplicated.
// Between consecutive breakpoints each such node is constant or a single branch.
std::vector<Rat> structural_breakpoints(const FuncExpr& f);

// Replaces set-dependent nodes by their value on the open interval (lo, hi),
// which must not contain a structural breakpoint.
FuncExpr specialize_on(const FuncExpr& f, const Rat& lo, const Rat& hi);

// dirichlet(a, b) -> const a (rational == true) or const b.
FuncExpr replace_dirichlet(const FuncExpr& f, bool rational);

}  // namespace lk
