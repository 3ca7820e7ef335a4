#include "merglift/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

namespace merglift {

MultiOrder::MultiOrder(std::initializer_list<std::pair<const int, int>> init) {
    for (const auto& [v, o] : init) set(v, o);
}

void MultiOrder::set(int var, int order) {
    if (order < 0) throw std::invalid_argument("derivative order must be >= 0");
    if (order == 0)
        orders_.erase(var);
    else
        orders_[var] = order;
}

int MultiOrder::of(int var) const {
    auto it = orders_.find(var);
    return it == orders_.end() ? 0 : it->second;
}

int MultiOrder::total() const {
    int t = 0;
    for (const auto& [v, o] : orders_) t += o;
    return t;
}

namespace {

Expr node(ExprKind k) {
    auto n = std::make_shared<ExprNode>();
    n->kind = k;
    return n;
}

Expr unary(ExprKind k, Expr a) {
    auto n = std::make_shared<ExprNode>();
    n->kind = k;
    n->a = std::move(a);
    return n;
}

Expr binary(ExprKind k, Expr a, Expr b) {
    auto n = std::make_shared<ExprNode>();
    n->kind = k;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

bool is_const(const Expr& e, Complex c) {
    return e->kind == ExprKind::Constant && e->value == c;
}

}  // namespace

Expr make_const(Complex c) {
    auto n = node(ExprKind::Constant);
    const_cast<ExprNode&>(*n).value = c;
    return n;
}

Expr make_var(int id) {
    auto n = node(ExprKind::Variable);
    const_cast<ExprNode&>(*n).var = id;
    return n;
}

Expr make_add(Expr a, Expr b) { return binary(ExprKind::Add, std::move(a), std::move(b)); }
Expr make_neg(Expr a) { return unary(ExprKind::Neg, std::move(a)); }
Expr make_mul(Expr a, Expr b) { return binary(ExprKind::Mul, std::move(a), std::move(b)); }
Expr make_div(Expr a, Expr b) { return binary(ExprKind::Div, std::move(a), std::move(b)); }

Expr make_pow(Expr a, int k) {
    if (k < 0) throw std::invalid_argument("negative exponent; use division");
    auto n = unary(ExprKind::Pow, std::move(a));
    const_cast<ExprNode&>(*n).exponent = k;
    return n;
}

Expr make_exp(Expr a) { return unary(ExprKind::Exp, std::move(a)); }
Expr make_sin(Expr a) { return unary(ExprKind::Sin, std::move(a)); }
Expr make_cos(Expr a) { return unary(ExprKind::Cos, std::move(a)); }

namespace {

Complex pow_int(Complex base, int k) {
    Complex r = 1.0;
    Complex b = base;
    int e = k;
    while (e > 0) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

}  // namespace

Expr fold_add(Expr a, Expr b) {
    if (a->kind == ExprKind::Constant && b->kind == ExprKind::Constant)
        return make_const(a->value + b->value);
    if (is_const(a, 0.0)) return b;
    if (is_const(b, 0.0)) return a;
    return make_add(std::move(a), std::move(b));
}

Expr fold_neg(Expr a) {
    if (a->kind == ExprKind::Constant) return make_const(-a->value);
    return make_neg(std::move(a));
}

Expr fold_sub(Expr a, Expr b) { return fold_add(std::move(a), fold_neg(std::move(b))); }

Expr fold_mul(Expr a, Expr b) {
    if (a->kind == ExprKind::Constant && b->kind == ExprKind::Constant)
        return make_const(a->value * b->value);
    if (is_const(a, 0.0) || is_const(b, 0.0)) return make_const(0.0);
    if (is_const(a, 1.0)) return b;
    if (is_const(b, 1.0)) return a;
    return make_mul(std::move(a), std::move(b));
}

Expr fold_div(Expr a, Expr b) {
    if (is_const(a, 0.0) && !is_const(b, 0.0)) return make_const(0.0);
    if (is_const(b, 1.0)) return a;
    if (a->kind == ExprKind::Constant && b->kind == ExprKind::Constant && b->value != 0.0)
        return make_const(a->value / b->value);
    return make_div(std::move(a), std::move(b));
}

Expr fold_pow(Expr a, int k) {
    if (k == 0) return make_const(1.0);
    if (k == 1) return a;
    if (a->kind == ExprKind::Constant) return make_const(pow_int(a->value, k));
    return make_pow(std::move(a), k);
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace {

class Parser {
public:
    explicit Parser(const std::string& text) : s_(text) {}

    Expr run() {
        Expr e = parse_expr();
        skip_ws();
        if (pos_ != s_.size()) throw ParseError("unexpected trailing input", pos_);
        return e;
    }

private:
    const std::string& s_;
    size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool peek(char c) {
        skip_ws();
        return pos_ < s_.size() && s_[pos_] == c;
    }

    bool consume(char c) {
        if (peek(c)) {
            ++pos_;
            return true;
        }
        return false;
    }

    Expr parse_expr() {
        Expr e = parse_term();
        for (;;) {
            if (consume('+')) {
                e = make_add(std::move(e), parse_term());
            } else if (consume('-')) {
                e = make_add(std::move(e), make_neg(parse_term()));
            } else {
                return e;
            }
        }
    }

    Expr parse_term() {
        Expr e = parse_factor();
        for (;;) {
            if (consume('*')) {
                e = make_mul(std::move(e), parse_factor());
            } else if (consume('/')) {
                e = make_div(std::move(e), parse_factor());
            } else {
                return e;
            }
        }
    }

    Expr parse_factor() {
        skip_ws();
        Expr e;
        if (pos_ < s_.size() && s_[pos_] == '-') {
            ++pos_;
            // A minus directly in front of a literal (no whitespace) is part
            // of the literal; anything else is a negation node.
            if (pos_ < s_.size() &&
                (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) {
                Expr lit = parse_number();
                e = make_const(-lit->value);
            } else {
                return make_neg(parse_factor());
            }
        } else {
            e = parse_atom();
        }
        while (peek('^')) {
            ++pos_;
            e = make_pow(std::move(e), parse_nat());
        }
        return e;
    }

    int parse_nat() {
        skip_ws();
        size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ == start) throw ParseError("expected integer exponent", pos_);
        int value = 0;
        auto [p, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, value);
        if (ec != std::errc{}) throw ParseError("exponent out of range", start);
        return value;
    }

    Expr parse_atom() {
        skip_ws();
        if (pos_ >= s_.size()) throw ParseError("unexpected end of input", pos_);
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = parse_expr();
            if (!consume(')')) throw ParseError("expected ')'", pos_);
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c))) return parse_identifier();
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    // A number literal: decimal, optionally with an 'i' suffix, optionally
    // immediately (no whitespace) followed by +/- and an imaginary part,
    // forming a single complex literal a+bi.
    Expr parse_number() {
        auto [mag, imag_flag] = lex_decimal();
        if (imag_flag) return make_const(Complex(0.0, mag));
        if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) {
            size_t save = pos_;
            double sign = s_[pos_] == '-' ? -1.0 : 1.0;
            ++pos_;
            if (pos_ < s_.size() &&
                (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) {
                auto [im, flag] = lex_decimal();
                if (flag) return make_const(Complex(mag, sign * im));
            }
            pos_ = save;
        }
        return make_const(Complex(mag, 0.0));
    }

    std::pair<double, bool> lex_decimal() {
        size_t start = pos_;
        while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) ||
                                    s_[pos_] == '.')) {
            ++pos_;
        }
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            size_t save = pos_;
            ++pos_;
            if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
            if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            } else {
                pos_ = save;
            }
        }
        double value = 0.0;
        auto [p, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, value);
        if (ec != std::errc{} || p != s_.data() + pos_)
            throw ParseError("malformed number", start);
        bool imag = false;
        if (pos_ < s_.size() && s_[pos_] == 'i') {
            imag = true;
            ++pos_;
        }
        return {value, imag};
    }

    Expr parse_identifier() {
        size_t start = pos_;
        while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        std::string name = s_.substr(start, pos_ - start);
        if (name == "i") return make_const(Complex(0.0, 1.0));
        if (name == "exp" || name == "sin" || name == "cos") {
            if (!consume('(')) throw ParseError("expected '(' after " + name, pos_);
            Expr arg = parse_expr();
            if (!consume(')')) throw ParseError("expected ')'", pos_);
            if (name == "exp") return make_exp(std::move(arg));
            if (name == "sin") return make_sin(std::move(arg));
            return make_cos(std::move(arg));
        }
        if (name.size() >= 2 && name[0] == 'z') {
            int id = 0;
            auto [p, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), id);
            if (ec == std::errc{} && p == name.data() + name.size()) return make_var(id);
        }
        throw ParseError("unknown identifier '" + name + "'", start);
    }
};

std::string format_double(double x) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, p);
}

std::string format_complex(Complex c) {
    double re = c.real(), im = c.imag();
    // A leading minus re-parses as negation of the following literal, so a
    // negative real part prints as the negated conjugate-sign literal.
    if (re < 0.0) return "-" + format_complex(-c);
    if (im == 0.0) return format_double(re);
    if (re == 0.0) return format_double(im) + "i";
    std::string s = format_double(re);
    if (im > 0 || std::isnan(im)) s += "+";
    s += format_double(im) + "i";
    return s;
}

}  // namespace

Expr parse(const std::string& text) { return Parser(text).run(); }

std::string to_string(const Expr& e) {
    switch (e->kind) {
        case ExprKind::Constant:
            return format_complex(e->value);
        case ExprKind::Variable:
            return "z" + std::to_string(e->var);
        case ExprKind::Add:
            return "(" + to_string(e->a) + " + " + to_string(e->b) + ")";
        case ExprKind::Neg:
            // Inner parentheses keep the minus from fusing with a literal.
            return "(-(" + to_string(e->a) + "))";
        case ExprKind::Mul:
            return "(" + to_string(e->a) + " * " + to_string(e->b) + ")";
        case ExprKind::Div:
            return "(" + to_string(e->a) + " / " + to_string(e->b) + ")";
        case ExprKind::Pow:
            return "(" + to_string(e->a) + " ^ " + std::to_string(e->exponent) + ")";
        case ExprKind::Exp:
            return "exp(" + to_string(e->a) + ")";
        case ExprKind::Sin:
            return "sin(" + to_string(e->a) + ")";
        case ExprKind::Cos:
            return "cos(" + to_string(e->a) + ")";
    }
    throw std::logic_error("unreachable");
}

bool structurally_equal(const Expr& a, const Expr& b) {
    if (a.get() == b.get()) return true;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case ExprKind::Constant:
            return a->value == b->value;
        case ExprKind::Variable:
            return a->var == b->var;
        case ExprKind::Pow:
            return a->exponent == b->exponent && structurally_equal(a->a, b->a);
        case ExprKind::Neg:
        case ExprKind::Exp:
        case ExprKind::Sin:
        case ExprKind::Cos:
            return structurally_equal(a->a, b->a);
        case ExprKind::Add:
        case ExprKind::Mul:
        case ExprKind::Div:
            return structurally_equal(a->a, b->a) && structurally_equal(a->b, b->b);
    }
    return false;
}

namespace {

void collect_vars(const Expr& e, std::set<int>& out) {
    if (e->kind == ExprKind::Variable) out.insert(e->var);
    if (e->a) collect_vars(e->a, out);
    if (e->b) collect_vars(e->b, out);
}

}  // namespace

std::set<int> free_vars(const Expr& e) {
    std::set<int> out;
    collect_vars(e, out);
    return out;
}

Complex evaluate(const Expr& e, const Assignment& at) {
    switch (e->kind) {
        case ExprKind::Constant:
            return e->value;
        case ExprKind::Variable: {
            auto it = at.find(e->var);
            if (it == at.end())
                throw EvalError("no value for variable z" + std::to_string(e->var));
            return it->second;
        }
        case ExprKind::Add:
            return evaluate(e->a, at) + evaluate(e->b, at);
        case ExprKind::Neg:
            return -evaluate(e->a, at);
        case ExprKind::Mul:
            return evaluate(e->a, at) * evaluate(e->b, at);
        case ExprKind::Div: {
            Complex den = evaluate(e->b, at);
            if (den == 0.0) throw EvalError("division by zero at evaluation point");
            return evaluate(e->a, at) / den;
        }
        case ExprKind::Pow:
            return pow_int(evaluate(e->a, at), e->exponent);
        case ExprKind::Exp:
            return std::exp(evaluate(e->a, at));
        case ExprKind::Sin:
            return std::sin(evaluate(e->a, at));
        case ExprKind::Cos:
            return std::cos(evaluate(e->a, at));
    }
    throw std::logic_error("unreachable");
}

namespace {

Expr derive_once(const Expr& e, int v) {
    switch (e->kind) {
        case ExprKind::Constant:
            return make_const(0.0);
        case ExprKind::Variable:
            return make_const(e->var == v ? 1.0 : 0.0);
        case ExprKind::Add:
            return fold_add(derive_once(e->a, v), derive_once(e->b, v));
        case ExprKind::Neg:
            return fold_neg(derive_once(e->a, v));
        case ExprKind::Mul:
            return fold_add(fold_mul(derive_once(e->a, v), e->b),
                            fold_mul(e->a, derive_once(e->b, v)));
        case ExprKind::Div:
            return fold_div(fold_sub(fold_mul(derive_once(e->a, v), e->b),
                                     fold_mul(e->a, derive_once(e->b, v))),
                            fold_pow(e->b, 2));
        case ExprKind::Pow:
            if (e->exponent == 0) return make_const(0.0);
            return fold_mul(fold_mul(make_const(Complex(e->exponent, 0.0)),
                                     fold_pow(e->a, e->exponent - 1)),
                            derive_once(e->a, v));
        case ExprKind::Exp:
            return fold_mul(make_exp(e->a), derive_once(e->a, v));
        case ExprKind::Sin:
            return fold_mul(make_cos(e->a), derive_once(e->a, v));
        case ExprKind::Cos:
            return fold_neg(fold_mul(make_sin(e->a), derive_once(e->a, v)));
    }
    throw std::logic_error("unreachable");
}

}  // namespace

Expr differentiate(const Expr& e, const MultiOrder& d) {
    Expr cur = e;
    for (const auto& [v, order] : d.orders()) {
        for (int k = 0; k < order; ++k) cur = derive_once(cur, v);
    }
    return cur;
}

Expr substitute(const Expr& e, int v, const Expr& replacement) {
    switch (e->kind) {
        case ExprKind::Constant:
            return e;
        case ExprKind::Variable:
            return e->var == v ? replacement : e;
        case ExprKind::Add:
            return fold_add(substitute(e->a, v, replacement), substitute(e->b, v, replacement));
        case ExprKind::Neg:
            return fold_neg(substitute(e->a, v, replacement));
        case ExprKind::Mul:
            return fold_mul(substitute(e->a, v, replacement), substitute(e->b, v, replacement));
        case ExprKind::Div:
            return fold_div(substitute(e->a, v, replacement), substitute(e->b, v, replacement));
        case ExprKind::Pow:
            return fold_pow(substitute(e->a, v, replacement), e->exponent);
        case ExprKind::Exp:
            return make_exp(substitute(e->a, v, replacement));
        case ExprKind::Sin:
            return make_sin(substitute(e->a, v, replacement));
        case ExprKind::Cos:
            return make_cos(substitute(e->a, v, replacement));
    }
    throw std::logic_error("unreachable");
}

Expr restrict_var(const Expr& e, int v, Complex value) {
    return substitute(e, v, make_const(value));
}

Expr substitute_affine(const Expr& e, int v, Complex a, Complex b) {
    return substitute(e, v, fold_add(fold_mul(make_const(a), make_var(v)), make_const(b)));
}

namespace {

constexpr int kCauchyNodes = 256;

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

Complex cauchy_recurse(const Expr& e, const std::map<int, int>& orders,
                       std::map<int, int>::const_iterator it, Assignment& point, double radius) {
    if (it == orders.end()) return evaluate(e, point);
    const auto [v, a] = *it;
    auto next = std::next(it);
    const Complex center = point.at(v);
    Complex acc = 0.0;
    for (int k = 0; k < kCauchyNodes; ++k) {
        double theta = 2.0 * M_PI * k / kCauchyNodes;
        Complex w = std::polar(radius, theta);
        point[v] = center + w;
        Complex inner = cauchy_recurse(e, orders, next, point, radius);
        acc += inner * std::polar(1.0, -a * theta);
    }
    point[v] = center;
    return acc * factorial(a) / (static_cast<double>(kCauchyNodes) * std::pow(radius, a));
}

}  // namespace

Complex numeric_derivative(const Expr& e, const MultiOrder& d, const Assignment& point,
                           double radius) {
    if (radius <= 0.0) throw std::invalid_argument("radius must be positive");
    Assignment p = point;
    for (const auto& [v, o] : d.orders())
        if (!p.count(v)) throw EvalError("point missing variable z" + std::to_string(v));
    return cauchy_recurse(e, d.orders(), d.orders().begin(), p, radius);
}

}  // namespace merglift
