#include "varreg/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace varreg {

std::string var_name(int id) {
    if (id == kVarT) return "t";
    return "y" + std::to_string(id);
}

std::optional<int> var_id(const std::string& name) {
    if (name == "t") return kVarT;
    if (name.size() >= 2 && name[0] == 'y') {
        int k = 0;
        for (std::size_t i = 1; i < name.size(); ++i) {
            if (!std::isdigit(static_cast<unsigned char>(name[i]))) return std::nullopt;
            k = k * 10 + (name[i] - '0');
            if (k > kMaxYIndex) return std::nullopt;
        }
        return k;
    }
    return std::nullopt;
}

Bindings::Bindings(const std::map<std::string, double>& named) {
    for (const auto& [name, v] : named) {
        auto id = var_id(name);
        if (!id) throw EvalError("unknown variable in bindings", name);
        if (*id == kVarT) t_ = v; else set_y(*id, v);
    }
}

Bindings& Bindings::set_y(int k, double v) {
    if (k < 0 || k > kMaxYIndex) throw EvalError("variable index out of range", var_name(k));
    if (static_cast<int>(y_.size()) <= k) y_.resize(k + 1);
    y_[k] = v;
    return *this;
}

std::optional<double> Bindings::get(int id) const {
    if (id == kVarT) return t_;
    if (id >= 0 && id < static_cast<int>(y_.size())) return y_[id];
    return std::nullopt;
}

namespace {

ExprNodePtr make_node(ExprNode n) { return std::make_shared<const ExprNode>(std::move(n)); }

double apply_unary(UnaryOp op, double x, const ExprNode& at);
double apply_binary(BinaryOp op, double a, double b, const ExprNode& at);

std::string print_node(const ExprNode& n, int parent_prec);

std::string node_text(const ExprNode& n) { return print_node(n, 0); }

double apply_unary(UnaryOp op, double x, const ExprNode& at) {
    switch (op) {
        case UnaryOp::Neg: return -x;
        case UnaryOp::Sin: return std::sin(x);
        case UnaryOp::Cos: return std::cos(x);
        case UnaryOp::Exp: return std::exp(x);
        case UnaryOp::Log:
            if (!(x > 0.0)) throw EvalError("log of non-positive value", node_text(at));
            return std::log(x);
        case UnaryOp::Sqrt:
            if (x < 0.0) throw EvalError("sqrt of negative value", node_text(at));
            return std::sqrt(x);
        case UnaryOp::Abs: return std::fabs(x);
    }
    throw EvalError("bad unary op", node_text(at));
}

double apply_binary(BinaryOp op, double a, double b, const ExprNode& at) {
    switch (op) {
        case BinaryOp::Add: return a + b;
        case BinaryOp::Sub: return a - b;
        case BinaryOp::Mul: return a * b;
        case BinaryOp::Div:
            if (b == 0.0) throw EvalError("division by zero", node_text(at));
            return a / b;
    }
    throw EvalError("bad binary op", node_text(at));
}

double ipow(double base, int e, const ExprNode& at) {
    if (e < 0) {
        if (base == 0.0) throw EvalError("division by zero", node_text(at));
        return 1.0 / ipow(base, -e, at);
    }
    // left-to-right repeated multiply keeps the node order fixed
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

double eval_node(const ExprNode& n, const Bindings& env) {
    switch (n.kind) {
        case ExprNode::Kind::Constant: return n.value;
        case ExprNode::Kind::Variable: {
            auto v = env.get(n.var);
            if (!v) throw EvalError("unbound variable", var_name(n.var));
            return *v;
        }
        case ExprNode::Kind::Unary: {
            double x = eval_node(*n.lhs, env);
            return apply_unary(n.uop, x, n);
        }
        case ExprNode::Kind::Binary: {
            double a = eval_node(*n.lhs, env);
            double b = eval_node(*n.rhs, env);
            return apply_binary(n.bop, a, b, n);
        }
        case ExprNode::Kind::Pow: {
            double a = eval_node(*n.lhs, env);
            return ipow(a, n.exponent, n);
        }
    }
    throw EvalError("bad node", "?");
}

const char* unary_name(UnaryOp op) {
    switch (op) {
        case UnaryOp::Neg: return "-";
        case UnaryOp::Sin: return "sin";
        case UnaryOp::Cos: return "cos";
        case UnaryOp::Exp: return "exp";
        case UnaryOp::Log: return "log";
        case UnaryOp::Sqrt: return "sqrt";
        case UnaryOp::Abs: return "abs";
    }
    return "?";
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Precedence levels: add/sub 1, mul/div 2, unary minus 3, pow 4, atoms 5.
std::string print_node(const ExprNode& n, int parent_prec) {
    std::string s;
    int prec = 5;
    switch (n.kind) {
        case ExprNode::Kind::Constant:
            if (n.value < 0.0 || (n.value == 0.0 && std::signbit(n.value))) {
                prec = 3;
                s = format_double(n.value);
            } else {
                s = format_double(n.value);
            }
            break;
        case ExprNode::Kind::Variable:
            s = var_name(n.var);
            break;
        case ExprNode::Kind::Unary:
            if (n.uop == UnaryOp::Neg) {
                prec = 3;
                s = "-" + print_node(*n.lhs, 3);
            } else {
                s = std::string(unary_name(n.uop)) + "(" + print_node(*n.lhs, 0) + ")";
            }
            break;
        case ExprNode::Kind::Binary: {
            bool addsub = n.bop == BinaryOp::Add || n.bop == BinaryOp::Sub;
            prec = addsub ? 1 : 2;
            const char* sym = n.bop == BinaryOp::Add ? " + "
                            : n.bop == BinaryOp::Sub ? " - "
                            : n.bop == BinaryOp::Mul ? "*" : "/";
            // right operand of - and / needs the next tighter level
            s = print_node(*n.lhs, prec) + sym + print_node(*n.rhs, prec + 1);
            break;
        }
        case ExprNode::Kind::Pow: {
            prec = 4;
            std::string e = n.exponent < 0 ? "(" + std::to_string(n.exponent) + ")"
                                           : std::to_string(n.exponent);
            s = print_node(*n.lhs, 5) + "^" + e;
            break;
        }
    }
    if (prec < parent_prec) return "(" + s + ")";
    return s;
}

} // namespace

ExprNodePtr Expr::constant_node(double v) {
    ExprNode n;
    n.kind = ExprNode::Kind::Constant;
    n.value = v;
    return make_node(std::move(n));
}

Expr Expr::constant(double v) { return Expr(constant_node(v)); }

Expr Expr::variable(int id) {
    if (id != kVarT && (id < 0 || id > kMaxYIndex))
        throw std::invalid_argument("variable index out of range: " + std::to_string(id));
    ExprNode n;
    n.kind = ExprNode::Kind::Variable;
    n.var = id;
    return Expr(make_node(std::move(n)));
}

Expr Expr::variable(const std::string& name) {
    auto id = var_id(name);
    if (!id) throw std::invalid_argument("unknown variable name: " + name);
    return variable(*id);
}

bool Expr::is_constant(double* out) const {
    if (node_->kind != ExprNode::Kind::Constant) return false;
    if (out) *out = node_->value;
    return true;
}

Expr Expr::unary(UnaryOp op, const Expr& a) {
    double ca;
    if (a.is_constant(&ca)) {
        ExprNode probe;
        probe.kind = ExprNode::Kind::Unary;
        probe.uop = op;
        probe.lhs = a.node_;
        try {
            return constant(apply_unary(op, ca, probe));
        } catch (const EvalError&) {
            // fold failed (domain); keep the node, error surfaces at evaluate()
        }
    }
    if (op == UnaryOp::Neg && a.node_->kind == ExprNode::Kind::Unary &&
        a.node_->uop == UnaryOp::Neg)
        return Expr(a.node_->lhs);
    ExprNode n;
    n.kind = ExprNode::Kind::Unary;
    n.uop = op;
    n.lhs = a.node_;
    return Expr(make_node(std::move(n)));
}

Expr Expr::binary(BinaryOp op, const Expr& a, const Expr& b) {
    double ca, cb;
    bool ka = a.is_constant(&ca), kb = b.is_constant(&cb);
    if (ka && kb) {
        ExprNode probe;
        probe.kind = ExprNode::Kind::Binary;
        probe.bop = op;
        probe.lhs = a.node_;
        probe.rhs = b.node_;
        try {
            return constant(apply_binary(op, ca, cb, probe));
        } catch (const EvalError&) {
        }
    }
    // 0/1 identities
    switch (op) {
        case BinaryOp::Add:
            if (ka && ca == 0.0) return b;
            if (kb && cb == 0.0) return a;
            break;
        case BinaryOp::Sub:
            if (kb && cb == 0.0) return a;
            if (ka && ca == 0.0) return unary(UnaryOp::Neg, b);
            break;
        case BinaryOp::Mul:
            if ((ka && ca == 0.0) || (kb && cb == 0.0)) return constant(0.0);
            if (ka && ca == 1.0) return b;
            if (kb && cb == 1.0) return a;
            break;
        case BinaryOp::Div:
            if (kb && cb == 1.0) return a;
            break;
    }
    ExprNode n;
    n.kind = ExprNode::Kind::Binary;
    n.bop = op;
    n.lhs = a.node_;
    n.rhs = b.node_;
    return Expr(make_node(std::move(n)));
}

Expr Expr::pow(const Expr& base, int exponent) {
    if (exponent == 0) return constant(1.0);
    if (exponent == 1) return base;
    double cb;
    if (base.is_constant(&cb)) {
        ExprNode probe;
        probe.kind = ExprNode::Kind::Pow;
        probe.exponent = exponent;
        probe.lhs = base.node_;
        try {
            return constant(ipow(cb, exponent, probe));
        } catch (const EvalError&) {
        }
    }
    ExprNode n;
    n.kind = ExprNode::Kind::Pow;
    n.exponent = exponent;
    n.lhs = base.node_;
    return Expr(make_node(std::move(n)));
}

namespace {

bool node_depends_on(const ExprNode& n, int var) {
    switch (n.kind) {
        case ExprNode::Kind::Constant: return false;
        case ExprNode::Kind::Variable: return n.var == var;
        case ExprNode::Kind::Unary:
        case ExprNode::Kind::Pow: return node_depends_on(*n.lhs, var);
        case ExprNode::Kind::Binary:
            return node_depends_on(*n.lhs, var) || node_depends_on(*n.rhs, var);
    }
    return false;
}

bool node_contains_abs(const ExprNode& n) {
    switch (n.kind) {
        case ExprNode::Kind::Constant:
        case ExprNode::Kind::Variable: return false;
        case ExprNode::Kind::Unary:
            return n.uop == UnaryOp::Abs || node_contains_abs(*n.lhs);
        case ExprNode::Kind::Pow: return node_contains_abs(*n.lhs);
        case ExprNode::Kind::Binary:
            return node_contains_abs(*n.lhs) || node_contains_abs(*n.rhs);
    }
    return false;
}

int node_max_y(const ExprNode& n) {
    switch (n.kind) {
        case ExprNode::Kind::Constant: return -1;
        case ExprNode::Kind::Variable: return n.var == kVarT ? -1 : n.var;
        case ExprNode::Kind::Unary:
        case ExprNode::Kind::Pow: return node_max_y(*n.lhs);
        case ExprNode::Kind::Binary:
            return std::max(node_max_y(*n.lhs), node_max_y(*n.rhs));
    }
    return -1;
}

} // namespace

bool Expr::depends_on(int var) const { return node_depends_on(*node_, var); }
bool Expr::contains_abs() const { return node_contains_abs(*node_); }
int Expr::max_y_index() const { return node_max_y(*node_); }

double Expr::evaluate(const Bindings& env) const { return eval_node(*node_, env); }

double Expr::evaluate(const std::map<std::string, double>& named) const {
    return evaluate(Bindings(named));
}

Expr detail_wrap_node(ExprNodePtr n) { return Expr(std::move(n)); }

namespace {

Expr diff_node(const Expr& e, int var) {
    const ExprNode& n = e.node();
    switch (n.kind) {
        case ExprNode::Kind::Constant: return Expr::constant(0.0);
        case ExprNode::Kind::Variable:
            return Expr::constant(n.var == var ? 1.0 : 0.0);
        case ExprNode::Kind::Unary: {
            Expr u = detail_wrap_node(n.lhs);
            if (!u.depends_on(var)) return Expr::constant(0.0);
            Expr du = diff_node(u, var);
            switch (n.uop) {
                case UnaryOp::Neg: return -du;
                case UnaryOp::Sin: return Expr::unary(UnaryOp::Cos, u) * du;
                case UnaryOp::Cos: return -(Expr::unary(UnaryOp::Sin, u) * du);
                case UnaryOp::Exp: return Expr::unary(UnaryOp::Exp, u) * du;
                case UnaryOp::Log: return du / u;
                case UnaryOp::Sqrt:
                    return du / (Expr::constant(2.0) * Expr::unary(UnaryOp::Sqrt, u));
                case UnaryOp::Abs:
                    throw NonDifferentiableError(
                        "abs is not differentiable; mollify first (node '" + e.print() + "')");
            }
            break;
        }
        case ExprNode::Kind::Binary: {
            Expr a = detail_wrap_node(n.lhs);
            Expr b = detail_wrap_node(n.rhs);
            Expr da = diff_node(a, var);
            Expr db = diff_node(b, var);
            switch (n.bop) {
                case BinaryOp::Add: return da + db;
                case BinaryOp::Sub: return da - db;
                case BinaryOp::Mul: return da * b + a * db;
                case BinaryOp::Div: return (da * b - a * db) / Expr::pow(b, 2);
            }
            break;
        }
        case ExprNode::Kind::Pow: {
            Expr base = detail_wrap_node(n.lhs);
            if (!base.depends_on(var)) return Expr::constant(0.0);
            Expr dbase = diff_node(base, var);
            return Expr::constant(static_cast<double>(n.exponent)) *
                   Expr::pow(base, n.exponent - 1) * dbase;
        }
    }
    throw std::logic_error("diff: bad node");
}

} // namespace

Expr Expr::differentiate(int var) const {
    // the abs check up front gives a clean error for any reachable abs that
    // depends on var, wherever it sits in the tree
    if (contains_abs() && depends_on(var)) {
        // only an error if some abs subtree actually depends on var
        struct Walk {
            static bool abs_depends(const ExprNode& n, int v) {
                switch (n.kind) {
                    case ExprNode::Kind::Constant:
                    case ExprNode::Kind::Variable: return false;
                    case ExprNode::Kind::Unary:
                        if (n.uop == UnaryOp::Abs && node_depends_on_pub(*n.lhs, v)) return true;
                        return abs_depends(*n.lhs, v);
                    case ExprNode::Kind::Pow: return abs_depends(*n.lhs, v);
                    case ExprNode::Kind::Binary:
                        return abs_depends(*n.lhs, v) || abs_depends(*n.rhs, v);
                }
                return false;
            }
            static bool node_depends_on_pub(const ExprNode& n, int v) {
                switch (n.kind) {
                    case ExprNode::Kind::Constant: return false;
                    case ExprNode::Kind::Variable: return n.var == v;
                    case ExprNode::Kind::Unary:
                    case ExprNode::Kind::Pow: return node_depends_on_pub(*n.lhs, v);
                    case ExprNode::Kind::Binary:
                        return node_depends_on_pub(*n.lhs, v) ||
                               node_depends_on_pub(*n.rhs, v);
                }
                return false;
            }
        };
        if (Walk::abs_depends(*node_, var))
            throw NonDifferentiableError("abs depends on " + var_name(var) +
                                         "; mollify first");
    }
    return diff_node(*this, var);
}

Expr Expr::differentiate(const std::string& name) const {
    auto id = var_id(name);
    if (!id) throw std::invalid_argument("unknown variable name: " + name);
    return differentiate(*id);
}

std::string Expr::print() const { return print_node(*node_, 0); }

// ---------------------------------------------------------------------------
// Parser: recursive descent.
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := '-' factor | power
//   power  := atom ('^' exponent)?
//   atom   := number | ident | ident '(' expr ')' | '(' expr ')'
// Exponents parse as a signed factor and must fold to an integer constant.
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
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    bool accept(char c) {
        if (peek() == c) { ++pos_; return true; }
        return false;
    }

    Expr parse_expr() {
        Expr e = parse_term();
        for (;;) {
            if (accept('+')) e = e + parse_term();
            else if (accept('-')) e = e - parse_term();
            else return e;
        }
    }

    Expr parse_term() {
        Expr e = parse_factor();
        for (;;) {
            if (accept('*')) e = e * parse_factor();
            else if (accept('/')) e = e / parse_factor();
            else return e;
        }
    }

    Expr parse_factor() {
        if (accept('-')) return -parse_factor();
        return parse_power();
    }

    Expr parse_power() {
        Expr base = parse_atom();
        if (accept('^')) {
            std::size_t at = pos_;
            Expr e = parse_exponent();
            double v;
            if (!e.is_constant(&v))
                throw ParseError("exponent must be a constant integer", at);
            double r = std::round(v);
            if (v != r || std::fabs(v) > 1e9)
                throw ParseError("non-integer exponent", at);
            return Expr::pow(base, static_cast<int>(r));
        }
        return base;
    }

    // sign, then an atom or a nested power (right-associative ^)
    Expr parse_exponent() {
        if (accept('-')) return -parse_exponent();
        return parse_power();
    }

    Expr parse_atom() {
        skip_ws();
        if (pos_ >= s_.size()) {
            // point at the last significant character (the dangling operator)
            std::size_t at = s_.size();
            while (at > 0 && std::isspace(static_cast<unsigned char>(s_[at - 1]))) --at;
            throw ParseError("unexpected end of input", at > 0 ? at - 1 : 0);
        }
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = parse_expr();
            if (!accept(')')) throw ParseError("expected ')'", pos_);
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c))) return parse_ident();
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    Expr parse_number() {
        std::size_t start = pos_;
        const char* begin = s_.c_str() + pos_;
        char* end = nullptr;
        double v = std::strtod(begin, &end);
        if (end == begin) throw ParseError("malformed number", start);
        pos_ += static_cast<std::size_t>(end - begin);
        return Expr::constant(v);
    }

    Expr parse_ident() {
        std::size_t start = pos_;
        while (pos_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
            ++pos_;
        std::string name = s_.substr(start, pos_ - start);
        static const std::map<std::string, UnaryOp> funcs = {
            {"sin", UnaryOp::Sin}, {"cos", UnaryOp::Cos}, {"exp", UnaryOp::Exp},
            {"log", UnaryOp::Log}, {"sqrt", UnaryOp::Sqrt}, {"abs", UnaryOp::Abs}};
        auto f = funcs.find(name);
        if (f != funcs.end()) {
            if (!accept('(')) throw ParseError("expected '(' after function name", pos_);
            Expr arg = parse_expr();
            if (!accept(')')) throw ParseError("expected ')'", pos_);
            return Expr::unary(f->second, arg);
        }
        auto id = var_id(name);
        if (!id) throw ParseError("unknown identifier '" + name + "'", start);
        return Expr::variable(*id);
    }
};

} // namespace

Expr parse(const std::string& text) { return Parser(text).run(); }

} // namespace varreg
