#include "lk/expr/parse.hpp"

#include "lk/core/errors.hpp"

#include <cctype>
#include <vector>

namespace lk {

namespace {

enum class Tok { number, ident, punct, end };

struct Token {
    Tok kind;
    std::string text;
    std::size_t column;  // 1-based
    bool fused = false;  // number written as INT/INT
};

std::vector<Token> lex(std::string_view s) {
    std::vector<Token> out;
    std::size_t i = 0;
    auto digit = [&](std::size_t k) { return k < s.size() && std::isdigit(static_cast<unsigned char>(s[k])); };
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        std::size_t start = i;
        if (digit(i) || (c == '.' && digit(i + 1))) {
            bool plain = true;
            while (digit(i)) ++i;
            if (i < s.size() && s[i] == '.') {
                plain = false;
                ++i;
                while (digit(i)) ++i;
            }
            if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
                std::size_t k = i + 1;
                if (k < s.size() && (s[k] == '+' || s[k] == '-')) ++k;
                if (digit(k)) {
                    plain = false;
                    i = k;
                    while (digit(i)) ++i;
                }
            }
            bool fused = false;
            if (plain && i < s.size() && s[i] == '/' && digit(i + 1)) {
                fused = true;
                ++i;
                while (digit(i)) ++i;
            }
            out.push_back({Tok::number, std::string(s.substr(start, i - start)), start + 1, fused});
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
            out.push_back({Tok::ident, std::string(s.substr(start, i - start)), start + 1});
            continue;
        }
        static const std::string_view punct = "()[],+-*/^|&\\~{}:";
        if (punct.find(c) == std::string_view::npos)
            throw ParseError(std::string("unexpected character '") + c + "'", start + 1);
        out.push_back({Tok::punct, std::string(1, c), start + 1});
        ++i;
    }
    out.push_back({Tok::end, "", s.size() + 1});
    return out;
}

// Backtracking marker: thrown inside a speculative branch and caught by it.
struct Backtrack {};

class Parser {
public:
    Parser(std::string_view text, const ParseOptions& opts) : toks_(lex(text)), opts_(opts) {}

    SetExpr whole_set() {
        SetExpr e = set_expr();
        expect_end();
        return e;
    }

    FuncExpr whole_func() {
        FuncExpr f = sum();
        expect_end();
        return f;
    }

private:
    const Token& peek(std::size_t ahead = 0) const {
        return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
    }
    bool is(const char* p, std::size_t ahead = 0) const {
        const Token& t = peek(ahead);
        return t.kind == Tok::punct && t.text == p;
    }
    bool is_ident(const char* name) const {
        return peek().kind == Tok::ident && peek().text == name;
    }
    const Token& take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

    [[noreturn]] void fail(const std::string& msg) const {
        if (speculative_ > 0) throw Backtrack{};
        const Token& t = peek();
        std::string found = t.kind == Tok::end ? "end of input" : "'" + t.text + "'";
        throw ParseError(msg + ", found " + found, t.column);
    }

    void expect(const char* p) {
        if (!is(p)) fail(std::string("expected '") + p + "'");
        take();
    }

    void expect_end() {
        if (peek().kind != Tok::end) fail("unexpected trailing input");
    }

    // ---- rational constant expressions (interval endpoints, shifts, exponents)

    Rat const_sum() {
        Rat v = const_prod();
        while (is("+") || is("-")) {
            bool plus = take().text == "+";
            Rat r = const_prod();
            v = plus ? Rat(v + r) : Rat(v - r);
        }
        return v;
    }

    Rat const_prod() {
        Rat v = const_unary();
        while (is("*") || is("/")) {
            bool times = take().text == "*";
            std::size_t col = peek().column;
            Rat r = const_unary();
            if (!times && sgn(r) == 0) {
                if (speculative_ > 0) throw Backtrack{};
                throw ParseError("division by zero in a constant", col);
            }
            v = times ? Rat(v * r) : Rat(v / r);
        }
        return v;
    }

    Rat const_unary() {
        if (is("-")) {
            take();
            return -const_unary();
        }
        Rat base = const_atom();
        if (is("^")) {
            take();
            std::size_t col = peek().column;
            Rat e = const_unary();
            if (e.get_den() != 1 || !e.get_num().fits_slong_p()) {
                if (speculative_ > 0) throw Backtrack{};
                throw ParseError("constant exponent must be an integer", col);
            }
            long k = e.get_num().get_si();
            if (k < 0 && sgn(base) == 0) {
                if (speculative_ > 0) throw Backtrack{};
                throw ParseError("zero to a negative power", col);
            }
            base = k < 0 ? Rat(1 / pow(base, -k)) : pow(base, k);
        }
        return base;
    }

    Rat const_atom() {
        const Token& t = peek();
        if (t.kind == Tok::number) return number();
        if (is_ident("n")) return template_n();
        if (is("(")) {
            take();
            Rat v = const_sum();
            expect(")");
            return v;
        }
        fail("expected a rational constant");
    }

    Rat number() {
        const Token& t = take();
        try {
            return parse_rat(t.text);
        } catch (const ParseError& e) {
            throw ParseError(e.message(), t.column);
        }
    }

    Rat template_n() {
        const Token& t = take();
        if (!opts_.n) {
            if (speculative_ > 0) throw Backtrack{};
            throw ParseError("unknown identifier 'n'", t.column);
        }
        return Rat(*opts_.n);
    }

    long integer_arg() {
        std::size_t col = peek().column;
        Rat v = const_sum();
        if (v.get_den() != 1 || !v.get_num().fits_slong_p()) throw ParseError("expected an integer", col);
        return v.get_num().get_si();
    }

    // ---- sets

    SetExpr set_expr() {
        SetExpr e = set_term();
        while (is("|") || is("&") || is("\\")) {
            std::string op = take().text;
            SetExpr r = set_term();
            if (op == "|") e = set::unite(std::move(e), std::move(r));
            else if (op == "&") e = set::meet(std::move(e), std::move(r));
            else e = set::minus(std::move(e), std::move(r), opts_.ambient);
        }
        return e;
    }

    SetExpr set_term() {
        if (is("~")) {
            take();
            return set::complement(set_term(), opts_.ambient);
        }
        SetExpr e = set_primary();
        while (is("+")) {
            take();
            Rat c = const_unary();
            e = set::shift(std::move(e), c, opts_.ambient);
        }
        return e;
    }

    SetExpr set_primary() {
        const Token& t = peek();
        if (is("[")) return interval_literal();
        if (is("(")) {
            std::size_t save = pos_;
            ++speculative_;
            try {
                SetExpr e = interval_literal();
                --speculative_;
                return e;
            } catch (const Backtrack&) {
                --speculative_;
                pos_ = save;
            }
            take();
            SetExpr e = set_expr();
            expect(")");
            return e;
        }
        if (t.kind == Tok::ident) {
            if (t.text == "empty") {
                take();
                return set::empty();
            }
            if (t.text == "I") {
                take();
                return set::whole(opts_.ambient);
            }
            if (t.text == "cantor") {
                take();
                expect("(");
                std::size_t col = peek().column;
                long n = integer_arg();
                if (n < 0 || n > 24) throw ParseError("cantor level must lie in 0..24", col);
                expect(")");
                return set::cantor(n);
            }
            throw ParseError("unknown identifier '" + t.text + "'", t.column);
        }
        fail("expected a set");
    }

    SetExpr interval_literal() {
        std::size_t col = peek().column;
        bool lo_closed = take().text == "[";
        Rat lo = const_sum();
        expect(",");
        Rat hi = const_sum();
        if (!is("]") && !is(")")) fail("expected ']' or ')'");
        bool hi_closed = take().text == "]";
        Interval i{lo, hi, lo_closed, hi_closed};
        if (i.empty()) {
            if (speculative_ > 0) throw Backtrack{};
            throw ParseError("empty interval " + to_string(i), col);
        }
        if (lo < opts_.ambient.lo || hi > opts_.ambient.hi)
            throw DomainError("interval " + to_string(i) + " escapes the ambient interval " +
                              to_string(opts_.ambient));
        return set::literal(i, opts_.ambient);
    }

    // ---- functions

    FuncExpr sum() {
        FuncExpr f = prod();
        while (is("+") || is("-")) {
            bool plus = take().text == "+";
            FuncExpr r = prod();
            f = plus ? fx::add(std::move(f), std::move(r)) : fx::sub(std::move(f), std::move(r));
        }
        return f;
    }

    FuncExpr prod() {
        FuncExpr f = unary();
        while (is("*") || is("/")) {
            bool times = take().text == "*";
            FuncExpr r = unary();
            f = times ? fx::mul(std::move(f), std::move(r)) : fx::div(std::move(f), std::move(r));
        }
        return f;
    }

    FuncExpr unary() {
        if (is("-")) {
            take();
            // A minus sign glued to a literal is part of the literal.
            if (peek().kind == Tok::number && !is("^", 1)) return fx::constant(-number());
            return fx::neg(unary());
        }
        return power();
    }

    FuncExpr power() {
        FuncExpr base = atom();
        if (!is("^")) return base;
        take();
        std::size_t col = peek().column;
        if (peek().kind == Tok::number && peek().fused)
            throw ParseError("rational exponents need parentheses", col);
        Rat e = const_unary();
        if (e.get_den() == 1 && sgn(e) >= 0) {
            if (!e.get_num().fits_slong_p()) throw ParseError("exponent too large", col);
            return fx::pow(std::move(base), e.get_num().get_si());
        }
        return fx::rpow(std::move(base), e);
    }

    std::vector<FuncExpr> args(std::size_t count) {
        expect("(");
        std::vector<FuncExpr> out;
        for (std::size_t i = 0; i < count; ++i) {
            if (i > 0) expect(",");
            out.push_back(sum());
        }
        expect(")");
        return out;
    }

    FuncExpr atom() {
        const Token& t = peek();
        if (t.kind == Tok::number) return fx::constant(number());
        if (is("(")) {
            take();
            FuncExpr f = sum();
            expect(")");
            return f;
        }
        if (t.kind != Tok::ident) fail("expected an expression");
        std::string name = t.text;
        std::size_t col = t.column;
        take();
        if (name == "x") return fx::x();
        if (name == "pi") return fx::pi();
        if (name == "n") {
            --pos_;
            return fx::constant(template_n());
        }
        if (name == "sin") return fx::sin(args(1)[0]);
        if (name == "cos") return fx::cos(args(1)[0]);
        if (name == "sqrt") return fx::sqrt(args(1)[0]);
        if (name == "abs") return fx::abs(args(1)[0]);
        if (name == "min") {
            auto a = args(2);
            return fx::min(a[0], a[1]);
        }
        if (name == "max") {
            auto a = args(2);
            return fx::max(a[0], a[1]);
        }
        if (name == "indicator") {
            expect("(");
            SetExpr s = set_expr();
            expect(")");
            return fx::indicator(std::move(s));
        }
        if (name == "dirichlet") {
            expect("(");
            Rat a = const_sum();
            expect(",");
            Rat b = const_sum();
            expect(")");
            return fx::dirichlet(a, b);
        }
        if (name == "piecewise") {
            expect("{");
            std::vector<Branch> branches;
            do {
                if (!branches.empty()) take();
                SetExpr s = set_expr();
                expect(":");
                FuncExpr f = sum();
                branches.push_back({std::move(s), std::move(f)});
            } while (is(","));
            expect("}");
            try {
                return fx::piecewise(std::move(branches));
            } catch (const PreconditionError& e) {
                throw ParseError(e.what(), col);
            }
        }
        throw ParseError("unknown identifier '" + name + "'", col);
    }

    std::vector<Token> toks_;
    const ParseOptions& opts_;
    std::size_t pos_ = 0;
    int speculative_ = 0;
};

// ---- printing

std::string print_rat_atom(const Rat& q) {
    if (sgn(q) >= 0 && q.get_den() == 1) return to_string(q);
    return "(" + to_string(q) + ")";
}

std::string print_set(const SetExpr& e, bool top);

std::string print_set(const SetExpr& e, bool top) {
    auto wrap = [&](const std::string& s) { return top ? s : "(" + s + ")"; };
    switch (e->op) {
        case SetOp::literal: return to_string(e->literal);
        case SetOp::empty: return "empty";
        case SetOp::whole: return "I";
        case SetOp::cantor: return "cantor(" + std::to_string(e->level) + ")";
        case SetOp::unite: return wrap(print_set(e->args[0], false) + " | " + print_set(e->args[1], false));
        case SetOp::meet: return wrap(print_set(e->args[0], false) + " & " + print_set(e->args[1], false));
        case SetOp::minus: return wrap(print_set(e->args[0], false) + " \\ " + print_set(e->args[1], false));
        case SetOp::complement: return "~" + print_set(e->args[0], false);
        case SetOp::shift: return wrap(print_set(e->args[0], false) + " + " + print_rat_atom(e->offset));
    }
    return "";
}

bool atomic(const FuncExpr& f) {
    switch (f->op) {
        case Op::neg:
        case Op::pow:
        case Op::rpow: return false;
        default: return true;
    }
}

std::string print_func(const FuncExpr& f, bool top) {
    auto wrap = [&](const std::string& s) { return top ? s : "(" + s + ")"; };
    auto bin = [&](const char* op) {
        return wrap(print_func(f->args[0], false) + " " + op + " " + print_func(f->args[1], false));
    };
    auto call = [&](const char* name) {
        std::string s = std::string(name) + "(";
        for (std::size_t i = 0; i < f->args.size(); ++i) {
            if (i > 0) s += ", ";
            s += print_func(f->args[i], true);
        }
        return s + ")";
    };
    auto base = [&]() {
        const FuncExpr& b = f->args[0];
        std::string s = print_func(b, false);
        return atomic(b) ? s : "(" + s + ")";
    };
    switch (f->op) {
        case Op::constant: return print_rat_atom(f->a);
        case Op::pi: return "pi";
        case Op::var: return "x";
        case Op::add: return bin("+");
        case Op::sub: return bin("-");
        case Op::mul: return bin("*");
        case Op::div: return bin("/");
        case Op::neg: return "-(" + print_func(f->args[0], true) + ")";
        case Op::pow: return base() + "^" + std::to_string(f->k);
        case Op::rpow: return base() + "^(" + to_string(f->a) + ")";
        case Op::sin: return call("sin");
        case Op::cos: return call("cos");
        case Op::sqrt: return call("sqrt");
        case Op::abs: return call("abs");
        case Op::min: return call("min");
        case Op::max: return call("max");
        case Op::indicator: return "indicator(" + print_set(f->set, true) + ")";
        case Op::dirichlet: return "dirichlet(" + to_string(f->a) + ", " + to_string(f->b) + ")";
        case Op::piecewise: {
            std::string s = "piecewise{";
            for (std::size_t i = 0; i < f->branches.size(); ++i) {
                if (i > 0) s += ", ";
                s += print_set(f->branches[i].set, true) + ": " + print_func(f->branches[i].f, true);
            }
            return s + "}";
        }
    }
    return "";
}

}  // namespace

SetExpr parse_set(std::string_view text, const ParseOptions& opts) {
    return Parser(text, opts).whole_set();
}

FuncExpr parse_func(std::string_view text, const ParseOptions& opts) {
    return Parser(text, opts).whole_func();
}

std::string print(const SetExpr& e) { return print_set(e, true); }
std::string print(const FuncExpr& f) { return print_func(f, true); }

}  // namespace lk
