#include "lk/lebesgue/quadrature.hpp"

#include "lk/core/errors.hpp"
#include "lk/expr/range.hpp"
#include "lk/lebesgue/dinterval.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <algorithm>
#include <unordered_map>

namespace lk {

FuncExpr fold_constants(const FuncExpr& f) {
    if (f->op == Op::piecewise || f->op == Op::indicator || f->args.empty()) return f;
    std::vector<FuncExpr> args;
    bool all_const = true, changed = false;
    for (const auto& a : f->args) {
        args.push_back(fold_constants(a));
        if (args.back() != a) changed = true;
        if (args.back()->op != Op::constant) all_const = false;
    }
    auto is = [&](std::size_t i, long v) { return args[i]->op == Op::constant && args[i]->a == v; };
    if (all_const) {
        const Rat& x = args[0]->a;
        switch (f->op) {
            case Op::add: return fx::constant(x + args[1]->a);
            case Op::sub: return fx::constant(x - args[1]->a);
            case Op::mul: return fx::constant(x * args[1]->a);
            case Op::div:
                if (sgn(args[1]->a) != 0) return fx::constant(x / args[1]->a);
                break;
            case Op::neg: return fx::constant(-x);
            case Op::pow: return fx::constant(pow(x, f->k));
            case Op::abs: return fx::constant(abs(x));
            case Op::min: return fx::constant(min(x, args[1]->a));
            case Op::max: return fx::constant(max(x, args[1]->a));
            default: break;
        }
    }
    switch (f->op) {
        case Op::mul:
            if (is(0, 0) || is(1, 0)) return fx::constant(0);
            if (is(0, 1)) return args[1];
            if (is(1, 1)) return args[0];
            break;
        case Op::add:
            if (is(0, 0)) return args[1];
            if (is(1, 0)) return args[0];
            break;
        case Op::sub:
            if (is(1, 0)) return args[0];
            break;
        case Op::div:
            if (is(1, 1)) return args[0];
            break;
        default: break;
    }
    if (!changed) return f;
    FuncNode n = *f;
    n.args = std::move(args);
    return std::make_shared<const FuncNode>(std::move(n));
}

namespace {

using Poly = std::vector<Rat>;

Poly poly_mul(const Poly& a, const Poly& b) {
    Poly r(a.size() + b.size() - 1, Rat(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

Poly poly_add(Poly a, const Poly& b, int sign) {
    if (a.size() < b.size()) a.resize(b.size(), Rat(0));
    for (std::size_t i = 0; i < b.size(); ++i) a[i] += sign * b[i];
    return a;
}

std::optional<Poly> to_poly(const FuncExpr& f, long max_degree) {
    auto sub = [&](std::size_t i) { return to_poly(f->args[i], max_degree); };
    switch (f->op) {
        case Op::constant: return Poly{f->a};
        case Op::var: return Poly{0, 1};
        case Op::add:
        case Op::sub: {
            auto a = sub(0), b = sub(1);
            if (!a || !b) return std::nullopt;
            return poly_add(*a, *b, f->op == Op::add ? 1 : -1);
        }
        case Op::neg: {
            auto a = sub(0);
            if (!a) return std::nullopt;
            for (auto& c : *a) c = -c;
            return a;
        }
        case Op::mul: {
            auto a = sub(0), b = sub(1);
            if (!a || !b) return std::nullopt;
            if (static_cast<long>(a->size() + b->size()) - 2 > max_degree) return std::nullopt;
            return poly_mul(*a, *b);
        }
        case Op::div: {
            if (f->args[1]->op != Op::constant || sgn(f->args[1]->a) == 0) return std::nullopt;
            auto a = sub(0);
            if (!a) return std::nullopt;
            for (auto& c : *a) c /= f->args[1]->a;
            return a;
        }
        case Op::pow: {
            auto a = sub(0);
            if (!a) return std::nullopt;
            if ((static_cast<long>(a->size()) - 1) * f->k > max_degree) return std::nullopt;
            Poly r{1};
            for (long i = 0; i < f->k; ++i) r = poly_mul(r, *a);
            return r;
        }
        default: return std::nullopt;
    }
}

}  // namespace

std::optional<std::vector<Rat>> as_polynomial(const FuncExpr& f, long max_degree) {
    return to_poly(f, max_degree);
}

namespace {

constexpr int K = kTaylorOrder;
using Series = std::array<DInterval, K + 1>;

struct Instr {
    Op op = Op::constant;
    int a = -1;
    int b = -1;
    long k = 0;
    DInterval c;  // constant value
    Rat r;        // rpow exponent
};

struct Tape {
    std::vector<Instr> code;
};

struct Compiler {
    Tape tape;
    std::unordered_map<const FuncNode*, int> seen;

    int emit(const FuncExpr& f) {
        auto it = seen.find(f.get());
        if (it != seen.end()) return it->second;
        Instr in;
        in.op = f->op;
        switch (f->op) {
            case Op::constant: in.c = DInterval::of(f->a); break;
            case Op::pi:
            case Op::var: break;
            case Op::add:
            case Op::sub:
            case Op::mul:
            case Op::div:
            case Op::min:
            case Op::max:
                in.a = emit(f->args[0]);
                in.b = emit(f->args[1]);
                break;
            case Op::pow:
                in.a = emit(f->args[0]);
                in.k = f->k;
                break;
            case Op::rpow:
                in.a = emit(f->args[0]);
                in.c = DInterval::of(f->a);
                in.r = f->a;
                break;
            case Op::neg:
            case Op::sin:
            case Op::cos:
            case Op::sqrt:
            case Op::abs: in.a = emit(f->args[0]); break;
            default: throw DIntervalFailure();
        }
        tape.code.push_back(in);
        int id = static_cast<int>(tape.code.size()) - 1;
        seen.emplace(f.get(), id);
        return id;
    }
};

std::optional<Tape> compile(const FuncExpr& f) {
    try {
        Compiler c;
        c.emit(f);
        return std::move(c.tape);
    } catch (const DIntervalFailure&) {
        return std::nullopt;
    }
}

const DInterval kZero{0, 0};

Series constant_series(const DInterval& v) {
    Series s;
    s.fill(kZero);
    s[0] = v;
    return s;
}

bool is_zero(const DInterval& v) { return v.lo == 0 && v.hi == 0; }

// Index of the last nonzero coefficient (-1 for the zero series).
int degree(const Series& a) {
    for (int k = K; k >= 0; --k)
        if (!is_zero(a[k])) return k;
    return -1;
}

Series mul(const Series& a, const Series& b) {
    Series r;
    r.fill(kZero);
    int da = degree(a), db = degree(b);
    for (int i = 0; i <= da; ++i) {
        if (is_zero(a[i])) continue;
        for (int j = 0; j <= db && i + j <= K; ++j) {
            if (is_zero(b[j])) continue;
            r[i + j] = r[i + j] + a[i] * b[j];
        }
    }
    return r;
}

DInterval by_int(const DInterval& v, long n) { return v / DInterval::point(static_cast<double>(n)); }

// p = a^alpha with a_0 away from 0: k a_0 p_k = sum_j (alpha j - (k - j)) a_j p_{k-j}.
Series power_series(const Series& a, const DInterval& alpha, const DInterval& p0) {
    Series p;
    p[0] = p0;
    for (int k = 1; k <= K; ++k) {
        DInterval acc = kZero;
        for (int j = 1; j <= k; ++j) {
            if (is_zero(a[j])) continue;
            DInterval coef = alpha * DInterval::point(j) - DInterval::point(k - j);
            acc = acc + coef * a[j] * p[k - j];
        }
        p[k] = acc / (DInterval::point(k) * a[0]);
    }
    return p;
}

// Which branch of abs / min / max applies on the whole cell.
enum class Choice : std::int8_t { none, first, second };

class TaylorEval {
public:
    explicit TaylorEval(const Tape& t) : tape_(t), vals_(t.code.size()), choice_(t.code.size(), Choice::none) {}

    // cell_pass decides branch choices that the point pass then reuses.
    const Series& run(const Series& x, bool cell_pass) {
        for (std::size_t i = 0; i < tape_.code.size(); ++i) vals_[i] = step(tape_.code[i], i, x, cell_pass);
        return vals_.back();
    }

private:
    Series step(const Instr& in, std::size_t i, const Series& x, bool cell_pass) {
        switch (in.op) {
            case Op::constant: return constant_series(in.c);
            case Op::pi: return constant_series(dpi());
            case Op::var: return x;
            case Op::add:
            case Op::sub: {
                Series r;
                const Series &a = vals_[in.a], &b = vals_[in.b];
                for (int k = 0; k <= K; ++k) r[k] = in.op == Op::add ? a[k] + b[k] : a[k] - b[k];
                return r;
            }
            case Op::neg: {
                Series r = vals_[in.a];
                for (auto& v : r) v = -v;
                return r;
            }
            case Op::mul: return mul(vals_[in.a], vals_[in.b]);
            case Op::div: {
                const Series &a = vals_[in.a], &b = vals_[in.b];
                if (b[0].contains_zero()) throw DIntervalFailure();
                Series q;
                for (int k = 0; k <= K; ++k) {
                    DInterval acc = a[k];
                    for (int j = 1; j <= k; ++j)
                        if (!is_zero(b[j])) acc = acc - b[j] * q[k - j];
                    q[k] = acc / b[0];
                }
                return q;
            }
            case Op::pow: {
                const Series& a = vals_[in.a];
                if (in.k == 0) return constant_series({1, 1});
                if (in.k == 1) return a;
                Series r;
                if (!a[0].contains_zero()) {
                    r = power_series(a, DInterval::point(static_cast<double>(in.k)), dpow(a[0], in.k));
                } else {
                    Series base = a;
                    r = constant_series({1, 1});
                    long e = in.k;
                    while (e > 0) {
                        if (e & 1) r = mul(r, base);
                        e >>= 1;
                        if (e > 0) base = mul(base, base);
                    }
                    r[0] = dpow(a[0], in.k);
                }
                return r;
            }
            case Op::rpow:
            case Op::sqrt: {
                const Series& a = vals_[in.a];
                if (!a[0].positive()) throw DIntervalFailure();
                if (in.op == Op::sqrt) return power_series(a, {0.5, 0.5}, dsqrt(a[0]));
                return power_series(a, in.c, drpow(a[0], in.r));
            }
            case Op::sin:
            case Op::cos: {
                const Series& a = vals_[in.a];
                Series s, c;
                s[0] = dsin(a[0]);
                c[0] = dcos(a[0]);
                for (int k = 1; k <= K; ++k) {
                    DInterval ss = kZero, cc = kZero;
                    for (int j = 1; j <= k; ++j) {
                        if (is_zero(a[j])) continue;
                        DInterval ja = DInterval::point(j) * a[j];
                        ss = ss + ja * c[k - j];
                        cc = cc + ja * s[k - j];
                    }
                    s[k] = by_int(ss, k);
                    c[k] = -by_int(cc, k);
                }
                return in.op == Op::sin ? s : c;
            }
            case Op::abs: {
                const Series& a = vals_[in.a];
                if (cell_pass) {
                    if (a[0].lo >= 0) choice_[i] = Choice::first;
                    else if (a[0].hi <= 0) choice_[i] = Choice::second;
                    else throw DIntervalFailure();
                }
                if (choice_[i] == Choice::first) return a;
                Series r = a;
                for (auto& v : r) v = -v;
                return r;
            }
            case Op::min:
            case Op::max: {
                const Series &a = vals_[in.a], &b = vals_[in.b];
                if (cell_pass) {
                    if (a[0].hi <= b[0].lo) choice_[i] = Choice::first;       // a <= b
                    else if (b[0].hi <= a[0].lo) choice_[i] = Choice::second;  // b <= a
                    else throw DIntervalFailure();
                }
                bool a_small = choice_[i] == Choice::first;
                return (in.op == Op::min) == a_small ? a : b;
            }
            default: throw DIntervalFailure();
        }
    }

    const Tape& tape_;
    std::vector<Series> vals_;
    std::vector<Choice> choice_;
};

// Integral of the order-K model over [a, b] centred at a double c in (a, b).
std::optional<DInterval> taylor_integral(const Tape& tape, const Rat& a, const Rat& b) {
    try {
        Rat mid = midpoint(a, b);
        double cd = mid.get_d();
        Rat c(cd);
        if (!(a < c && c < b)) return std::nullopt;
        DInterval rl = DInterval::of(c - a), rr = DInterval::of(b - c);
        DInterval A = DInterval::of(a), B = DInterval::of(b);

        TaylorEval ev(tape);
        Series x = constant_series({A.lo, B.hi});
        x[1] = {1, 1};
        DInterval remainder_coef = ev.run(x, true)[K];

        Series xp = constant_series(DInterval::point(cd));
        xp[1] = {1, 1};
        Series p = ev.run(xp, false);

        DInterval total = kZero;
        DInterval rr_pow = rr, rl_pow = rl;  // r^(k+1)
        for (int k = 0; k <= K; ++k) {
            DInterval m = (k % 2 == 0) ? rr_pow + rl_pow : rr_pow - rl_pow;
            m = by_int(m, k + 1);
            total = total + (k < K ? p[k] : remainder_coef) * m;
            rr_pow = rr_pow * rr;
            rl_pow = rl_pow * rl;
        }
        return total;
    } catch (const DIntervalFailure&) {
        return std::nullopt;
    }
}

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Cell {
    Rat a, b;
    int piece = 0;
    int depth = 0;
    DInterval enc;  // {-inf, inf} when unbounded
    double width() const { return enc.hi - enc.lo; }
};

struct Wider {
    bool operator()(const Cell& x, const Cell& y) const { return x.width() < y.width(); }
};

struct Piece {
    FuncExpr f;
    std::optional<Tape> tape;
};

class Integrator {
public:
    explicit Integrator(const QuadOptions& o) : opts_(o) {}

    void add_piece(const FuncExpr& g, const Rat& a, const Rat& b) {
        FuncExpr f = fold_constants(g);
        if (f->op == Op::constant) {
            exact_ += f->a * (b - a);
            return;
        }
        if (auto p = as_polynomial(f)) {
            for (std::size_t i = 0; i < p->size(); ++i) {
                long e = static_cast<long>(i) + 1;
                exact_ += (*p)[i] * (pow(b, e) - pow(a, e)) / e;
            }
            return;
        }
        pieces_.push_back({f, compile(f)});
        push(make_cell(static_cast<int>(pieces_.size()) - 1, a, b, 0));
    }

    QuadResult run() {
        exact_d_ = to_double(exact_);
        for (;;) {
            while (!heap_.empty()) {
                double target = target_width();
                if (drift_ > 0.01 * target) recompute();
                if (unbounded_ == 0 && total_width_ <= target * (1 - 1e-9)) break;
                if (cells_ >= opts_.max_cells) break;
                Cell c = pop();
                remove(c);
                Rat m = midpoint(c.a, c.b);
                push(make_cell(c.piece, c.a, m, c.depth + 1));
                push(make_cell(c.piece, m, c.b, c.depth + 1));
            }
            QuadResult r = finish();
            Rat target = max(opts_.tol, opts_.rel_tol * magnitude(r.value));
            r.at_tolerance = r.value.width() <= target;
            if (r.at_tolerance || heap_.empty() || cells_ >= opts_.max_cells) return r;
            // Floating bookkeeping was optimistic; recompute and continue.
            recompute();
            if (total_width_ <= target_width() * (1 - 1e-9)) {
                // Force progress on the widest cell.
                Cell c = pop();
                remove(c);
                Rat m = midpoint(c.a, c.b);
                push(make_cell(c.piece, c.a, m, c.depth + 1));
                push(make_cell(c.piece, m, c.b, c.depth + 1));
            }
        }
    }

private:
    double target_width() const {
        double mid = exact_d_ + mid_sum_;
        return std::max(to_double(opts_.tol), to_double(opts_.rel_tol) * std::fabs(mid));
    }

    Cell make_cell(int piece, const Rat& a, const Rat& b, int depth) {
        ++cells_;
        Cell c{a, b, piece, depth, {-kInf, kInf}};
        const Piece& p = pieces_[piece];
        if (p.tape) {
            if (auto t = taylor_integral(*p.tape, a, b)) {
                c.enc = *t;
                return c;
            }
        }
        try {
            RangeEnclosure r = range_enclosure(p.f, Interval::closed(a, b));
            if (r.bounded() && !r.partial) {
                Rat w = b - a;
                Rat lo = w * r.lo.value(), hi = w * r.hi.value();
                if (lo == hi) {
                    c.enc = {0, 0};
                    exact_cells_ += lo;
                    exact_d_ = to_double(exact_ + exact_cells_);
                    c.a = c.b;  // marks a resolved cell
                    return c;
                }
                try {
                    c.enc = {DInterval::of(lo).lo, DInterval::of(hi).hi};
                } catch (const DIntervalFailure&) {
                }
            }
        } catch (const EvalError&) {
        }
        if (c.enc.lo == -kInf && depth > 64) throw UnboundedError("integrand is unbounded near " + to_string(a));
        return c;
    }

    void push(Cell c) {
        if (c.a == c.b) return;
        account(c, 1);
        heap_.push_back(std::move(c));
        std::push_heap(heap_.begin(), heap_.end(), Wider{});
    }

    Cell pop() {
        std::pop_heap(heap_.begin(), heap_.end(), Wider{});
        Cell c = std::move(heap_.back());
        heap_.pop_back();
        return c;
    }

    void remove(const Cell& c) { account(c, -1); }

    void account(const Cell& c, int sign) {
        double w = c.width();
        if (std::isfinite(w)) {
            total_width_ += sign * w;
            mid_sum_ += sign * 0.5 * (c.enc.lo + c.enc.hi);
            // Rounding error of the running sums, so that huge early cells
            // do not leave residue behind.
            drift_ += 1e-15 * (std::fabs(total_width_) + w + std::fabs(c.enc.lo) + std::fabs(c.enc.hi));
        } else {
            unbounded_ += sign;
        }
    }

    void recompute() {
        total_width_ = 0;
        mid_sum_ = 0;
        unbounded_ = 0;
        for (const auto& c : heap_) account(c, 1);
        drift_ = 0;
    }

    QuadResult finish() {
        Rat lo = exact_ + exact_cells_, hi = lo;
        for (const auto& c : heap_) {
            if (!std::isfinite(c.width()))
                throw UnboundedError("integrand is not bounded on " + to_string(c.a) + ".." + to_string(c.b));
            lo += Rat(c.enc.lo);
            hi += Rat(c.enc.hi);
        }
        return {{lo, hi}, false, cells_};
    }

    QuadOptions opts_;
    std::vector<Piece> pieces_;
    std::vector<Cell> heap_;  // max-heap on width
    Rat exact_ = 0, exact_cells_ = 0;
    double exact_d_ = 0, total_width_ = 0, mid_sum_ = 0, drift_ = 0;
    long unbounded_ = 0;
    std::size_t cells_ = 0;
};

}  // namespace

std::optional<Enclosure> taylor_cell_integral(const FuncExpr& f, const Rat& a, const Rat& b) {
    auto tape = compile(fold_constants(f));
    if (!tape) return std::nullopt;
    auto t = taylor_integral(*tape, a, b);
    if (!t) return std::nullopt;
    return Enclosure{Rat(t->lo), Rat(t->hi)};
}

QuadResult integrate(const FuncExpr& f, const std::vector<Interval>& domain, const QuadOptions& opts) {
    if (sgn(opts.tol) < 0 || sgn(opts.rel_tol) < 0) throw PreconditionError("tolerances must be nonnegative");
    std::vector<Rat> cuts = structural_breakpoints(f);
    Integrator in(opts);
    for (const auto& iv : domain) {
        if (!(iv.lo < iv.hi)) continue;
        Rat prev = iv.lo;
        auto it = std::upper_bound(cuts.begin(), cuts.end(), iv.lo);
        for (;; ++it) {
            Rat next = (it != cuts.end() && *it < iv.hi) ? *it : iv.hi;
            in.add_piece(specialize_on(f, prev, next), prev, next);
            if (next == iv.hi) break;
            prev = next;
        }
    }
    return in.run();
}

QuadResult integrate(const FuncExpr& f, const Rat& a, const Rat& b, const QuadOptions& opts) {
    if (b < a) throw PreconditionError("integration bounds out of order");
    return integrate(f, std::vector<Interval>{Interval::closed(a, b)}, opts);
}

}  // namespace lk
