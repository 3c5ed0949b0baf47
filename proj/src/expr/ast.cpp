#include "lk/expr/ast.hpp"

#include "lk/core/errors.hpp"
#include "lk/core/nested.hpp"

#include <algorithm>

namespace lk {

namespace set {

namespace {

SetExpr make(SetNode n) { return std::make_shared<const SetNode>(std::move(n)); }

}  // namespace

SetExpr literal(const Interval& i, const Interval& ambient) {
    if (i.empty()) throw PreconditionError("empty interval literal " + to_string(i));
    SetNode n{SetOp::literal, i, 0, {}, ambient, {}, canonicalize({i}, ambient)};
    return make(std::move(n));
}

SetExpr empty() {
    return make(SetNode{SetOp::empty, {}, 0, {}, {}, {}, {}});
}

SetExpr whole(const Interval& ambient) {
    return make(SetNode{SetOp::whole, {}, 0, {}, ambient, {}, from_interval(ambient)});
}

SetExpr cantor(long n) {
    return make(SetNode{SetOp::cantor, {}, n, {}, {}, {}, cantor_level(n)});
}

SetExpr unite(SetExpr a, SetExpr b) {
    IntervalSet v = set_union(a->value, b->value);
    return make(SetNode{SetOp::unite, {}, 0, {}, {}, {std::move(a), std::move(b)}, std::move(v)});
}

SetExpr meet(SetExpr a, SetExpr b) {
    IntervalSet v = intersect(a->value, b->value);
    return make(SetNode{SetOp::meet, {}, 0, {}, {}, {std::move(a), std::move(b)}, std::move(v)});
}

SetExpr minus(SetExpr a, SetExpr b, const Interval& ambient) {
    IntervalSet v = difference(a->value, b->value, ambient);
    return make(SetNode{SetOp::minus, {}, 0, {}, ambient, {std::move(a), std::move(b)}, std::move(v)});
}

SetExpr complement(SetExpr a, const Interval& ambient) {
    IntervalSet v = lk::complement(a->value, ambient);
    return make(SetNode{SetOp::complement, {}, 0, {}, ambient, {std::move(a)}, std::move(v)});
}

SetExpr shift(SetExpr a, const Rat& c, const Interval& ambient) {
    IntervalSet v = translate(a->value, c, ambient);
    return make(SetNode{SetOp::shift, {}, 0, c, ambient, {std::move(a)}, std::move(v)});
}

}  // namespace set

bool equal(const SetExpr& a, const SetExpr& b) {
    if (a == b) return true;
    if (a->op != b->op || a->args.size() != b->args.size()) return false;
    switch (a->op) {
        case SetOp::literal:
            if (!(a->literal == b->literal)) return false;
            break;
        case SetOp::cantor:
            if (a->level != b->level) return false;
            break;
        case SetOp::shift:
            if (a->offset != b->offset) return false;
            break;
        default:
            break;
    }
    for (std::size_t i = 0; i < a->args.size(); ++i)
        if (!equal(a->args[i], b->args[i])) return false;
    return true;
}

namespace fx {

namespace {

FuncExpr make(FuncNode n) { return std::make_shared<const FuncNode>(std::move(n)); }

FuncNode node(Op op) {
    FuncNode n;
    n.op = op;
    return n;
}

FuncExpr unary(Op op, FuncExpr a) {
    FuncNode n = node(op);
    n.args = {std::move(a)};
    return make(std::move(n));
}

FuncExpr binary(Op op, FuncExpr a, FuncExpr b) {
    FuncNode n = node(op);
    n.args = {std::move(a), std::move(b)};
    return make(std::move(n));
}

}  // namespace

FuncExpr constant(const Rat& q) {
    FuncNode n = node(Op::constant);
    n.a = q;
    return make(std::move(n));
}

FuncExpr pi() { return make(node(Op::pi)); }
FuncExpr x() { return make(node(Op::var)); }
FuncExpr add(FuncExpr a, FuncExpr b) { return binary(Op::add, std::move(a), std::move(b)); }
FuncExpr sub(FuncExpr a, FuncExpr b) { return binary(Op::sub, std::move(a), std::move(b)); }
FuncExpr mul(FuncExpr a, FuncExpr b) { return binary(Op::mul, std::move(a), std::move(b)); }
FuncExpr div(FuncExpr a, FuncExpr b) { return binary(Op::div, std::move(a), std::move(b)); }
FuncExpr neg(FuncExpr a) { return unary(Op::neg, std::move(a)); }

FuncExpr pow(FuncExpr a, long k) {
    if (k < 0) throw PreconditionError("integer exponent must be nonnegative");
    FuncNode n = node(Op::pow);
    n.k = k;
    n.args = {std::move(a)};
    return make(std::move(n));
}

FuncExpr rpow(FuncExpr a, const Rat& r) {
    if (r.get_den() == 1 && sgn(r) >= 0 && r.get_num().fits_slong_p())
        return pow(std::move(a), r.get_num().get_si());
    FuncNode n = node(Op::rpow);
    n.a = r;
    n.args = {std::move(a)};
    return make(std::move(n));
}

FuncExpr sin(FuncExpr a) { return unary(Op::sin, std::move(a)); }
FuncExpr cos(FuncExpr a) { return unary(Op::cos, std::move(a)); }
FuncExpr sqrt(FuncExpr a) { return unary(Op::sqrt, std::move(a)); }
FuncExpr abs(FuncExpr a) { return unary(Op::abs, std::move(a)); }
FuncExpr min(FuncExpr a, FuncExpr b) { return binary(Op::min, std::move(a), std::move(b)); }
FuncExpr max(FuncExpr a, FuncExpr b) { return binary(Op::max, std::move(a), std::move(b)); }

FuncExpr indicator(SetExpr s) {
    FuncNode n = node(Op::indicator);
    n.set = std::move(s);
    return make(std::move(n));
}

FuncExpr dirichlet(const Rat& on_rationals, const Rat& on_irrationals) {
    FuncNode n = node(Op::dirichlet);
    n.a = on_rationals;
    n.b = on_irrationals;
    return make(std::move(n));
}

FuncExpr piecewise(std::vector<Branch> branches) {
    if (branches.empty()) throw PreconditionError("piecewise needs at least one branch");
    for (std::size_t i = 0; i < branches.size(); ++i)
        for (std::size_t j = i + 1; j < branches.size(); ++j)
            if (!intersect(branches[i].set->value, branches[j].set->value).empty())
                throw PreconditionError("piecewise branches " + std::to_string(i + 1) + " and " +
                                        std::to_string(j + 1) + " overlap");
    FuncNode n = node(Op::piecewise);
    n.branches = std::move(branches);
    return make(std::move(n));
}

}  // namespace fx

bool equal(const FuncExpr& a, const FuncExpr& b) {
    if (a == b) return true;
    if (a->op != b->op || a->args.size() != b->args.size() ||
        a->branches.size() != b->branches.size())
        return false;
    switch (a->op) {
        case Op::constant:
        case Op::rpow:
            if (a->a != b->a) return false;
            break;
        case Op::dirichlet:
            if (a->a != b->a || a->b != b->b) return false;
            break;
        case Op::pow:
            if (a->k != b->k) return false;
            break;
        case Op::indicator:
            if (!equal(a->set, b->set)) return false;
            break;
        default:
            break;
    }
    for (std::size_t i = 0; i < a->args.size(); ++i)
        if (!equal(a->args[i], b->args[i])) return false;
    for (std::size_t i = 0; i < a->branches.size(); ++i)
        if (!equal(a->branches[i].set, b->branches[i].set) ||
            !equal(a->branches[i].f, b->branches[i].f))
            return false;
    return true;
}

bool is_constant(const FuncExpr& f) {
    if (f->op == Op::var || f->op == Op::indicator || f->op == Op::dirichlet ||
        f->op == Op::piecewise)
        return false;
    for (const auto& a : f->args)
        if (!is_constant(a)) return false;
    return true;
}

bool contains_op(const FuncExpr& f, Op op) {
    if (f->op == op) return true;
    for (const auto& a : f->args)
        if (contains_op(a, op)) return true;
    for (const auto& br : f->branches)
        if (contains_op(br.f, op)) return true;
    return false;
}

namespace {

void collect_breakpoints(const FuncExpr& f, std::vector<Rat>& out) {
    if (f->op == Op::indicator) {
        for (auto& e : f->set->value.endpoints()) out.push_back(e);
    }
    for (const auto& br : f->branches) {
        for (auto& e : br.set->value.endpoints()) out.push_back(e);
        collect_breakpoints(br.f, out);
    }
    for (const auto& a : f->args) collect_breakpoints(a, out);
}

}  // namespace

std::vector<Rat> structural_breakpoints(const FuncExpr& f) {
    std::vector<Rat> out;
    collect_breakpoints(f, out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

FuncExpr rebuild(const FuncExpr& f, std::vector<FuncExpr> args) {
    bool same = true;
    for (std::size_t i = 0; i < args.size(); ++i)
        if (args[i] != f->args[i]) same = false;
    if (same) return f;
    FuncNode n = *f;
    n.args = std::move(args);
    return std::make_shared<const FuncNode>(std::move(n));
}

// Which of "all of (lo,hi) in S" / "none of (lo,hi) in S" holds.
int open_cell_membership(const IntervalSet& s, const Rat& lo, const Rat& hi) {
    Interval cell = Interval::open(lo, hi);
    for (const auto& c : s.components()) {
        if (c.contains(cell)) return 1;
        if (c.hi > lo && c.lo < hi) return -1;  // overlaps without containing
    }
    return 0;
}

}  // namespace

FuncExpr specialize_on(const FuncExpr& f, const Rat& lo, const Rat& hi) {
    switch (f->op) {
        case Op::indicator: {
            int m = open_cell_membership(f->set->value, lo, hi);
            if (m < 0) throw PreconditionError("cell straddles an indicator boundary");
            return fx::constant(m);
        }
        case Op::piecewise: {
            for (const auto& br : f->branches) {
                int m = open_cell_membership(br.set->value, lo, hi);
                if (m < 0) throw PreconditionError("cell straddles a piecewise boundary");
                if (m == 1) return specialize_on(br.f, lo, hi);
            }
            return fx::constant(0);
        }
        default:
            break;
    }
    if (f->args.empty()) return f;
    std::vector<FuncExpr> args;
    args.reserve(f->args.size());
    for (const auto& a : f->args) args.push_back(specialize_on(a, lo, hi));
    return rebuild(f, std::move(args));
}

FuncExpr replace_dirichlet(const FuncExpr& f, bool rational) {
    if (f->op == Op::dirichlet) return fx::constant(rational ? f->a : f->b);
    if (f->op == Op::piecewise) {
        std::vector<Branch> bs;
        for (const auto& br : f->branches) bs.push_back({br.set, replace_dirichlet(br.f, rational)});
        return fx::piecewise(std::move(bs));
    }
    if (f->args.empty()) return f;
    std::vector<FuncExpr> args;
    for (const auto& a : f->args) args.push_back(replace_dirichlet(a, rational));
    return rebuild(f, std::move(args));
}

}  // namespace lk
