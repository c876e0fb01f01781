// Expression trees over t, y0..y32: the Lagrangian representation and the
// single source of all symbolic partial derivatives.
#ifndef VARREG_EXPR_HPP
#define VARREG_EXPR_HPP

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace varreg {

// Variable ids: -1 is t, k >= 0 is yk (highest supported index 32).
constexpr int kVarT = -1;
constexpr int kMaxYIndex = 32;

std::string var_name(int id);
std::optional<int> var_id(const std::string& name);

enum class UnaryOp { Neg, Sin, Cos, Exp, Log, Sqrt, Abs };
enum class BinaryOp { Add, Sub, Mul, Div };

struct ParseError : std::runtime_error {
    ParseError(const std::string& what, std::size_t at)
        : std::runtime_error(what + " at offset " + std::to_string(at)), offset(at) {}
    std::size_t offset;
};

struct EvalError : std::runtime_error {
    EvalError(const std::string& what, std::string node_text)
        : std::runtime_error(what + " in '" + node_text + "'"), node(std::move(node_text)) {}
    std::string node;
};

struct NonDifferentiableError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExprNode;
using ExprNodePtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    enum class Kind { Constant, Variable, Unary, Binary, Pow };
    Kind kind;
    double value = 0.0;   // Constant
    int var = 0;          // Variable
    UnaryOp uop{};        // Unary
    BinaryOp bop{};       // Binary
    int exponent = 0;     // Pow
    ExprNodePtr lhs, rhs; // Unary/Pow use lhs only
};

// Variable bindings for evaluation. Unbound lookups raise EvalError.
class Bindings {
public:
    Bindings() = default;
    explicit Bindings(const std::map<std::string, double>& named);

    Bindings& set_t(double v) { t_ = v; return *this; }
    Bindings& set_y(int k, double v);
    std::optional<double> get(int id) const;

private:
    std::optional<double> t_;
    std::vector<std::optional<double>> y_;
};

// Immutable expression; all factories constant-fold and apply 0/1 identities.
class Expr {
public:
    Expr() : node_(constant_node(0.0)) {}

    static Expr constant(double v);
    static Expr variable(int id);
    static Expr variable(const std::string& name);

    static Expr unary(UnaryOp op, const Expr& a);
    static Expr binary(BinaryOp op, const Expr& a, const Expr& b);
    static Expr pow(const Expr& base, int exponent);

    Expr operator+(const Expr& o) const { return binary(BinaryOp::Add, *this, o); }
    Expr operator-(const Expr& o) const { return binary(BinaryOp::Sub, *this, o); }
    Expr operator*(const Expr& o) const { return binary(BinaryOp::Mul, *this, o); }
    Expr operator/(const Expr& o) const { return binary(BinaryOp::Div, *this, o); }
    Expr operator-() const { return unary(UnaryOp::Neg, *this); }

    const ExprNode& node() const { return *node_; }

    bool is_constant(double* out = nullptr) const;
    bool depends_on(int var) const;
    bool contains_abs() const;
    // Highest yk index referenced, or -1 when none.
    int max_y_index() const;

    // IEEE double evaluation in left-to-right post-order.
    double evaluate(const Bindings& env) const;
    double evaluate(const std::map<std::string, double>& named) const;

    // Exact symbolic partial derivative, constant-folded. Throws
    // NonDifferentiableError if an abs node depends on var.
    Expr differentiate(int var) const;
    Expr differentiate(const std::string& name) const;

    // Canonical parseable text.
    std::string print() const;

private:
    explicit Expr(ExprNodePtr n) : node_(std::move(n)) {}
    static ExprNodePtr constant_node(double v);
    friend Expr detail_wrap_node(ExprNodePtr n);
    ExprNodePtr node_;
};

// Internal: views an existing (already folded) node as an Expr.
Expr detail_wrap_node(ExprNodePtr n);

// Parses infix text (precedence ^ > unary - > * / > + -, unary function-call
// syntax, decimal literals). Pow exponents must fold to integer constants.
Expr parse(const std::string& text);

} // namespace varreg

#endif
