#pragma once

#include <complex>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>

namespace merglift {

using Complex = std::complex<double>;

/// Index of a complex variable z<id>.
struct Var {
    int id = 0;
    Var() = default;
    explicit Var(int i) : id(i) {}
    auto operator<=>(const Var&) const = default;
};

/// Finitely supported map variable -> derivative order. Zero orders are not stored.
class MultiOrder {
public:
    MultiOrder() = default;
    MultiOrder(std::initializer_list<std::pair<const int, int>> init);

    void set(int var, int order);
    int of(int var) const;
    int total() const;
    bool empty() const { return orders_.empty(); }
    const std::map<int, int>& orders() const { return orders_; }

    bool operator==(const MultiOrder&) const = default;

private:
    std::map<int, int> orders_;
};

enum class ExprKind {
    Constant,
    Variable,
    Add,
    Neg,
    Mul,
    Div,
    Pow,
    Exp,
    Sin,
    Cos,
};

struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

/// Immutable expression tree node.
struct ExprNode {
    ExprKind kind;
    Complex value{};   // Constant
    int var = -1;      // Variable
    int exponent = 0;  // Pow
    Expr a, b;         // children
};

// Raw constructors (no folding). Used by the parser.
Expr make_const(Complex c);
Expr make_var(int id);
Expr make_add(Expr a, Expr b);
Expr make_neg(Expr a);
Expr make_mul(Expr a, Expr b);
Expr make_div(Expr a, Expr b);
Expr make_pow(Expr a, int k);
Expr make_exp(Expr a);
Expr make_sin(Expr a);
Expr make_cos(Expr a);

// Folding constructors: collapse constant subtrees and trivial identities
// (x+0, x*0, x*1). Used when building derivatives and substitutions.
Expr fold_add(Expr a, Expr b);
Expr fold_sub(Expr a, Expr b);
Expr fold_neg(Expr a);
Expr fold_mul(Expr a, Expr b);
Expr fold_div(Expr a, Expr b);
Expr fold_pow(Expr a, int k);

struct ParseError : std::runtime_error {
    size_t position;
    ParseError(const std::string& msg, size_t pos)
        : std::runtime_error(msg + " (at position " + std::to_string(pos) + ")"), position(pos) {}
};

struct EvalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Assignment = std::map<int, Complex>;

/// Parse the expression grammar: variables z1,z2,...; operators + - * / ^;
/// functions exp, sin, cos; complex literals like 2, 0.5i, 1+2i.
Expr parse(const std::string& text);

/// Deterministic, fully parenthesized rendering; parse(to_string(e)) is
/// structurally equal to e.
std::string to_string(const Expr& e);

bool structurally_equal(const Expr& a, const Expr& b);

std::set<int> free_vars(const Expr& e);

Complex evaluate(const Expr& e, const Assignment& at);

/// Exact symbolic mixed derivative.
Expr differentiate(const Expr& e, const MultiOrder& d);

/// Substitute variable v by a constant.
Expr restrict_var(const Expr& e, int v, Complex value);

/// Substitute variable v by an arbitrary expression.
Expr substitute(const Expr& e, int v, const Expr& replacement);

/// Substitute z_v -> a*z_v + b.
Expr substitute_affine(const Expr& e, int v, Complex a, Complex b);

/// Iterated Cauchy-integral derivative: trapezoid rule on circles of the
/// given radius around the point, 256 nodes per circle. Independent oracle
/// for differentiate().
Complex numeric_derivative(const Expr& e, const MultiOrder& d, const Assignment& point,
                           double radius);

}  // namespace merglift
