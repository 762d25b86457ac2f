#pragma once

/// Mini-language for function definitions.
///
///   expr   := ["-"] term (("+"|"-") term)*
///   term   := factor (("*"|"/") factor)*
///   factor := atom ("^" integer)?
///   atom   := number | "pi" | var | call | "(" expr ")"
///   var    := "x" integer          (1-based, bounded by the declared order)
///   call   := ident "(" args ")"   ident in {sin,cos,exp,sqrt,abs,
///                                            indicator,bump,hk_osc}
///
/// bump(a,c,e) is the mollifier profile b(t)=exp(1-1/(1-t^2)) rescaled to the
/// interval [c-e/2, c+e/2] of the argument a; peak value 1 at the center.
/// hk_osc(a) is the derivative of t^2 sin(t^-2), extended by 0 at 0 -- the
/// canonical non-absolutely-integrable integrand.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <cstdio>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sdspace/errors.hpp"

namespace sdspace {

enum class ExprKind {
    Constant,
    Var,
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Neg,
    Sin,
    Cos,
    Exp,
    Sqrt,
    Abs,
    Indicator,
    Bump,
    HkOsc,
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    ExprKind kind;
    double value = 0.0;  // Constant
    int var = 0;         // Var (1-based)
    int ipow = 0;        // Pow exponent
    ExprPtr a, b;        // operands
    double lo = 0.0, hi = 0.0;          // Indicator bounds
    double center = 0.0, edge = 0.0;    // Bump geometry
    int bump_deriv = 0;                 // Bump: profile derivative order (0..2)
    bool is_pi = false;                 // Constant printed as "pi"
};

namespace exprs {

inline ExprPtr constant(double v, bool pi = false) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Constant;
    e->value = v;
    e->is_pi = pi;
    return e;
}
inline ExprPtr var(int i) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Var;
    e->var = i;
    return e;
}
inline ExprPtr node(ExprKind k, ExprPtr a, ExprPtr b = nullptr) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    e->a = std::move(a);
    e->b = std::move(b);
    return e;
}

inline bool is_const(const ExprPtr& e, double v) {
    return e->kind == ExprKind::Constant && e->value == v && !e->is_pi;
}

// Smart constructors with light constant folding; keeps symbolic
// derivatives from ballooning.
inline ExprPtr add(ExprPtr a, ExprPtr b) {
    if (is_const(a, 0)) return b;
    if (is_const(b, 0)) return a;
    if (a->kind == ExprKind::Constant && b->kind == ExprKind::Constant && !a->is_pi && !b->is_pi)
        return constant(a->value + b->value);
    return node(ExprKind::Add, std::move(a), std::move(b));
}
inline ExprPtr sub(ExprPtr a, ExprPtr b) {
    if (is_const(b, 0)) return a;
    if (a->kind == ExprKind::Constant && b->kind == ExprKind::Constant && !a->is_pi && !b->is_pi)
        return constant(a->value - b->value);
    return node(ExprKind::Sub, std::move(a), std::move(b));
}
inline ExprPtr mul(ExprPtr a, ExprPtr b) {
    if (is_const(a, 0) || is_const(b, 0)) return constant(0);
    if (is_const(a, 1)) return b;
    if (is_const(b, 1)) return a;
    if (a->kind == ExprKind::Constant && b->kind == ExprKind::Constant && !a->is_pi && !b->is_pi)
        return constant(a->value * b->value);
    return node(ExprKind::Mul, std::move(a), std::move(b));
}
inline ExprPtr div(ExprPtr a, ExprPtr b) {
    if (is_const(a, 0)) return constant(0);
    if (is_const(b, 1)) return a;
    return node(ExprKind::Div, std::move(a), std::move(b));
}
inline ExprPtr pow(ExprPtr a, int n) {
    if (n == 0) return constant(1);
    if (n == 1) return a;
    auto e = node(ExprKind::Pow, std::move(a));
    const_cast<Expr*>(e.get())->ipow = n;
    return e;
}
inline ExprPtr neg(ExprPtr a) {
    if (a->kind == ExprKind::Constant && !a->is_pi) return constant(-a->value);
    return node(ExprKind::Neg, std::move(a));
}
inline ExprPtr bump(ExprPtr arg, double c, double e, int deriv = 0) {
    auto n = node(ExprKind::Bump, std::move(arg));
    auto* m = const_cast<Expr*>(n.get());
    m->center = c;
    m->edge = e;
    m->bump_deriv = deriv;
    return n;
}
inline ExprPtr indicator(ExprPtr arg, double lo, double hi) {
    auto n = node(ExprKind::Indicator, std::move(arg));
    auto* m = const_cast<Expr*>(n.get());
    m->lo = lo;
    m->hi = hi;
    return n;
}

}  // namespace exprs

/// Mollifier profile b(t)=exp(1-1/(1-t^2)) on (-1,1), with derivatives up
/// to order 2.
inline double bump_profile(double t, int deriv = 0) {
    double s = 1.0 - t * t;
    if (s <= 0.0) return 0.0;
    double b = std::exp(1.0 - 1.0 / s);
    switch (deriv) {
        case 0:
            return b;
        case 1:
            return b * (-2.0 * t / (s * s));
        case 2: {
            double u1 = -2.0 * t / (s * s);
            double u2 = -2.0 / (s * s) - 8.0 * t * t / (s * s * s);
            return b * (u2 + u1 * u1);
        }
        default:
            throw DomainError("bump_profile: derivative order > 2 not supported");
    }
}

inline double hk_osc_value(double x) {
    if (x == 0.0) return 0.0;
    double inv2 = 1.0 / (x * x);
    return 2.0 * x * std::sin(inv2) - (2.0 / x) * std::cos(inv2);
}

inline double eval_expr(const Expr& e, std::span<const double> x) {
    switch (e.kind) {
        case ExprKind::Constant:
            return e.value;
        case ExprKind::Var:
            return x[static_cast<std::size_t>(e.var - 1)];
        case ExprKind::Add:
            return eval_expr(*e.a, x) + eval_expr(*e.b, x);
        case ExprKind::Sub:
            return eval_expr(*e.a, x) - eval_expr(*e.b, x);
        case ExprKind::Mul: {
            // Short-circuit on an exact zero; lets products of a vanishing
            // factor with a singular one (e.g. x^2 * sin(1/x^2) at 0)
            // evaluate to 0 instead of NaN.
            double va = eval_expr(*e.a, x);
            if (va == 0.0) return 0.0;
            return va * eval_expr(*e.b, x);
        }
        case ExprKind::Div:
            return eval_expr(*e.a, x) / eval_expr(*e.b, x);
        case ExprKind::Pow:
            return std::pow(eval_expr(*e.a, x), e.ipow);
        case ExprKind::Neg:
            return -eval_expr(*e.a, x);
        case ExprKind::Sin:
            return std::sin(eval_expr(*e.a, x));
        case ExprKind::Cos:
            return std::cos(eval_expr(*e.a, x));
        case ExprKind::Exp:
            return std::exp(eval_expr(*e.a, x));
        case ExprKind::Sqrt:
            return std::sqrt(eval_expr(*e.a, x));
        case ExprKind::Abs:
            return std::fabs(eval_expr(*e.a, x));
        case ExprKind::Indicator: {
            double v = eval_expr(*e.a, x);
            return (e.lo <= v && v <= e.hi) ? 1.0 : 0.0;
        }
        case ExprKind::Bump: {
            double t = (eval_expr(*e.a, x) - e.center) / (0.5 * e.edge);
            return bump_profile(t, e.bump_deriv);
        }
        case ExprKind::HkOsc:
            return hk_osc_value(eval_expr(*e.a, x));
    }
    return 0.0;  // unreachable
}

/// Symbolic d/dx_i; nullopt where no analytic rule applies (abs, indicator,
/// hk_osc, bump beyond second derivative).
inline std::optional<ExprPtr> diff_expr(const ExprPtr& e, int i) {
    using namespace exprs;
    switch (e->kind) {
        case ExprKind::Constant:
            return constant(0);
        case ExprKind::Var:
            return constant(e->var == i ? 1 : 0);
        case ExprKind::Add: {
            auto da = diff_expr(e->a, i), db = diff_expr(e->b, i);
            if (!da || !db) return std::nullopt;
            return add(*da, *db);
        }
        case ExprKind::Sub: {
            auto da = diff_expr(e->a, i), db = diff_expr(e->b, i);
            if (!da || !db) return std::nullopt;
            return sub(*da, *db);
        }
        case ExprKind::Mul: {
            auto da = diff_expr(e->a, i), db = diff_expr(e->b, i);
            if (!da || !db) return std::nullopt;
            return add(mul(*da, e->b), mul(e->a, *db));
        }
        case ExprKind::Div: {
            auto da = diff_expr(e->a, i), db = diff_expr(e->b, i);
            if (!da || !db) return std::nullopt;
            return div(sub(mul(*da, e->b), mul(e->a, *db)), pow(e->b, 2));
        }
        case ExprKind::Pow: {
            auto da = diff_expr(e->a, i);
            if (!da) return std::nullopt;
            return mul(mul(constant(e->ipow), pow(e->a, e->ipow - 1)), *da);
        }
        case ExprKind::Neg: {
            auto da = diff_expr(e->a, i);
            if (!da) return std::nullopt;
            return neg(*da);
        }
        case ExprKind::Sin: {
            auto da = diff_expr(e->a, i);
            if (!da) return std::nullopt;
            return mul(node(ExprKind::Cos, e->a), *da);
        }
        case ExprKind::Cos: {
            auto da = diff_expr(e->a, i);
            if (!da) return std::nullopt;
            return neg(mul(node(ExprKind::Sin, e->a), *da));
        }
        case ExprKind::Exp: {
            auto da = diff_expr(e->a, i);
            if (!da) return std::nullopt;
            return mul(node(ExprKind::Exp, e->a), *da);
        }
        case ExprKind::Sqrt: {
            auto da = diff_expr(e->a, i);
            if (!da) return std::nullopt;
            return div(*da, mul(constant(2), node(ExprKind::Sqrt, e->a)));
        }
        case ExprKind::Bump: {
            if (e->bump_deriv >= 2) return std::nullopt;
            auto da = diff_expr(e->a, i);
            if (!da) return std::nullopt;
            if (exprs::is_const(*da, 0)) return constant(0);
            return mul(mul(bump(e->a, e->center, e->edge, e->bump_deriv + 1),
                           constant(2.0 / e->edge)),
                       *da);
        }
        case ExprKind::Abs:
        case ExprKind::Indicator:
        case ExprKind::HkOsc:
            return std::nullopt;
    }
    return std::nullopt;
}

inline int max_var_index(const Expr& e) {
    int m = e.kind == ExprKind::Var ? e.var : 0;
    if (e.a) m = std::max(m, max_var_index(*e.a));
    if (e.b) m = std::max(m, max_var_index(*e.b));
    return m;
}

inline bool contains_kind(const Expr& e, ExprKind k) {
    if (e.kind == k) return true;
    if (e.a && contains_kind(*e.a, k)) return true;
    if (e.b && contains_kind(*e.b, k)) return true;
    return false;
}

// ---------------------------------------------------------------------------
// Printing

namespace detail {

inline std::string fmt_num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline int precedence(ExprKind k) {
    switch (k) {
        case ExprKind::Add:
        case ExprKind::Sub:
            return 1;
        case ExprKind::Mul:
        case ExprKind::Div:
            return 2;
        case ExprKind::Neg:
            return 3;
        case ExprKind::Pow:
            return 4;
        default:
            return 5;
    }
}

inline std::string print_rec(const Expr& e, int parent_prec) {
    auto wrap = [&](const std::string& s) {
        return precedence(e.kind) < parent_prec ? "(" + s + ")" : s;
    };
    switch (e.kind) {
        case ExprKind::Constant:
            if (e.is_pi) return "pi";
            if (e.value < 0) return wrap(fmt_num(e.value));
            return fmt_num(e.value);
        case ExprKind::Var:
            return "x" + std::to_string(e.var);
        case ExprKind::Add:
            return wrap(print_rec(*e.a, 1) + "+" + print_rec(*e.b, 2));
        case ExprKind::Sub:
            return wrap(print_rec(*e.a, 1) + "-" + print_rec(*e.b, 2));
        case ExprKind::Mul:
            return wrap(print_rec(*e.a, 2) + "*" + print_rec(*e.b, 3));
        case ExprKind::Div:
            return wrap(print_rec(*e.a, 2) + "/" + print_rec(*e.b, 3));
        case ExprKind::Pow:
            return wrap(print_rec(*e.a, 5) + "^" + std::to_string(e.ipow));
        case ExprKind::Neg:
            return wrap("-" + print_rec(*e.a, 3));
        case ExprKind::Sin:
            return "sin(" + print_rec(*e.a, 0) + ")";
        case ExprKind::Cos:
            return "cos(" + print_rec(*e.a, 0) + ")";
        case ExprKind::Exp:
            return "exp(" + print_rec(*e.a, 0) + ")";
        case ExprKind::Sqrt:
            return "sqrt(" + print_rec(*e.a, 0) + ")";
        case ExprKind::Abs:
            return "abs(" + print_rec(*e.a, 0) + ")";
        case ExprKind::Indicator:
            return "indicator(" + print_rec(*e.a, 0) + "," + fmt_num(e.lo) + "," + fmt_num(e.hi) +
                   ")";
        case ExprKind::Bump: {
            std::string s = "bump(" + print_rec(*e.a, 0) + "," + fmt_num(e.center) + "," +
                            fmt_num(e.edge) + ")";
            // Internal nodes with bump_deriv>0 never come from the parser and
            // are not printable losslessly; tag them for debugging only.
            if (e.bump_deriv > 0) s += "'" + std::string((std::size_t)e.bump_deriv, '\'');
            return s;
        }
        case ExprKind::HkOsc:
            return "hk_osc(" + print_rec(*e.a, 0) + ")";
    }
    return "";
}

}  // namespace detail

inline std::string print_expr(const Expr& e) { return detail::print_rec(e, 0); }
inline std::string print_expr(const ExprPtr& e) { return detail::print_rec(*e, 0); }

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

class Parser {
  public:
    Parser(std::string_view text, int order) : text_(text), order_(order) {}

    ExprPtr parse() {
        ExprPtr e = expr();
        skip_ws();
        if (pos_ != text_.size()) throw ParseError("trailing input", pos_);
        return e;
    }

  private:
    std::string_view text_;
    int order_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool peek(char c) {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == c;
    }
    bool accept(char c) {
        if (peek(c)) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c)) throw ParseError(std::string("expected '") + c + "'", pos_);
    }

    ExprPtr expr() {
        bool negate = accept('-');
        ExprPtr e = term();
        if (negate) e = exprs::neg(std::move(e));
        while (true) {
            if (accept('+'))
                e = exprs::node(ExprKind::Add, std::move(e), term());
            else if (accept('-'))
                e = exprs::node(ExprKind::Sub, std::move(e), term());
            else
                return e;
        }
    }

    ExprPtr term() {
        ExprPtr e = factor();
        while (true) {
            if (accept('*'))
                e = exprs::node(ExprKind::Mul, std::move(e), factor());
            else if (accept('/'))
                e = exprs::node(ExprKind::Div, std::move(e), factor());
            else
                return e;
        }
    }

    ExprPtr factor() {
        ExprPtr e = atom();
        if (accept('^')) {
            skip_ws();
            std::size_t start = pos_;
            bool neg = pos_ < text_.size() && text_[pos_] == '-';
            if (neg) ++pos_;
            std::size_t digits = 0;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
                ++digits;
            }
            if (digits == 0) throw ParseError("expected integer exponent", start);
            int n = std::stoi(std::string(text_.substr(start, pos_ - start)));
            e = exprs::node(ExprKind::Pow, std::move(e));
            const_cast<Expr*>(e.get())->ipow = n;
        }
        return e;
    }

    ExprPtr atom() {
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            ExprPtr e = expr();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return ident();
        throw ParseError("unexpected character", pos_);
    }

    ExprPtr number() {
        const char* begin = text_.data() + pos_;
        char* end = nullptr;
        double v = std::strtod(begin, &end);
        if (end == begin) throw ParseError("bad number", pos_);
        pos_ += static_cast<std::size_t>(end - begin);
        return exprs::constant(v);
    }

    double const_arg() {
        // indicator/bump bounds: any constant subexpression (numbers, pi,
        // arithmetic on them, unary minus).
        ExprPtr e = expr();
        if (max_var_index(*e) != 0) throw ParseError("expected constant argument", pos_);
        return eval_expr(*e, {});
    }

    ExprPtr ident() {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        std::string name(text_.substr(start, pos_ - start));
        if (name == "pi") return exprs::constant(std::numbers::pi, true);
        if (name.size() >= 2 && name[0] == 'x' &&
            std::all_of(name.begin() + 1, name.end(),
                        [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); })) {
            int idx = std::stoi(name.substr(1));
            if (idx < 1 || idx > order_)
                throw ParseError("variable index out of range: " + name, start);
            return exprs::var(idx);
        }
        if (name == "sin" || name == "cos" || name == "exp" || name == "sqrt" || name == "abs" ||
            name == "hk_osc") {
            expect('(');
            ExprPtr a = expr();
            expect(')');
            ExprKind k = name == "sin"    ? ExprKind::Sin
                         : name == "cos"  ? ExprKind::Cos
                         : name == "exp"  ? ExprKind::Exp
                         : name == "sqrt" ? ExprKind::Sqrt
                         : name == "abs"  ? ExprKind::Abs
                                          : ExprKind::HkOsc;
            return exprs::node(k, std::move(a));
        }
        if (name == "indicator") {
            expect('(');
            ExprPtr a = expr();
            expect(',');
            double lo = const_arg();
            expect(',');
            double hi = const_arg();
            expect(')');
            if (lo > hi) throw ParseError("indicator bounds out of order", start);
            return exprs::indicator(std::move(a), lo, hi);
        }
        if (name == "bump") {
            expect('(');
            ExprPtr a = expr();
            expect(',');
            double c0 = const_arg();
            expect(',');
            double e0 = const_arg();
            expect(')');
            if (e0 <= 0) throw ParseError("bump edge must be positive", start);
            return exprs::bump(std::move(a), c0, e0);
        }
        throw ParseError("unknown identifier: " + name, start);
    }
};

}  // namespace detail

/// Parse `text` into an AST with all variable indices <= order.
inline ExprPtr parse_expr(std::string_view text, int order) {
    return detail::Parser(text, order).parse();
}

}  // namespace sdspace
