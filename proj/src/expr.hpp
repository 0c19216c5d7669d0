#ifndef TDS_EXPR_HPP
#define TDS_EXPR_HPP

#include <complex>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "interval.hpp"

namespace tds {

// Scalar expression over the Laplace symbol `s` and named real parameters.
// Grammar: numbers, identifiers, + - * / ^ (integer exponent), exp(.),
// parentheses, unary minus. Trees are immutable; evaluation and
// differentiation are pure, so Expr values may be shared across threads.
class Expr {
public:
    enum class Kind { Constant, Variable, Add, Sub, Mul, Div, Neg, Pow, Exp };

    struct Node {
        Kind kind;
        double value = 0.0;      // Constant
        std::string name;        // Variable
        long exponent = 0;       // Pow
        std::shared_ptr<const Node> a, b;
    };

    Expr() : node_(constant_node(0.0)) {}

    static Expr parse(std::string_view text);
    static Expr constant(double v);
    static Expr variable(const std::string& name);

    // Smart constructors with constant folding and 0/1 elimination.
    friend Expr operator+(const Expr& x, const Expr& y);
    friend Expr operator-(const Expr& x, const Expr& y);
    friend Expr operator*(const Expr& x, const Expr& y);
    friend Expr operator/(const Expr& x, const Expr& y);
    friend Expr operator-(const Expr& x);
    static Expr pow(const Expr& x, long n);
    static Expr exp(const Expr& x);

    // Evaluation. `s` binds the Laplace symbol; params bind everything else.
    std::complex<double> eval(std::complex<double> s,
                              const std::map<std::string, double>& params) const;
    // Real evaluation for parameter-only expressions (rejects `s`).
    double eval_real(const std::map<std::string, double>& params) const;

    // Exact symbolic derivative w.r.t. a parameter name. Derivative w.r.t.
    // an absent variable is the zero expression.
    Expr diff(const std::string& var) const;

    std::string str() const;

    std::set<std::string> free_vars() const;
    bool uses(const std::string& name) const;
    bool is_constant() const { return node_->kind == Kind::Constant; }
    double constant_value() const { return node_->value; }

    // Structural equality of the folded trees (used to group quasi-polynomial
    // terms that share a delay function).
    bool same_tree(const Expr& other) const;

    const std::shared_ptr<const Node>& node() const { return node_; }

private:
    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    static std::shared_ptr<const Node> constant_node(double v);

    std::shared_ptr<const Node> node_;

    friend class CompiledExpr;
};

// Expr flattened to a postfix program against a fixed parameter order.
// Exists so the sweep / contour inner loops do not walk shared_ptr trees.
class CompiledExpr {
public:
    CompiledExpr() = default;
    CompiledExpr(const Expr& e, const std::vector<std::string>& param_names);

    std::complex<double> eval(std::complex<double> s, std::span<const double> params) const;
    double eval_real(std::span<const double> params) const;
    Interval eval_interval(std::span<const Interval> params) const;

    bool uses_s() const { return uses_s_; }
    bool empty() const { return prog_.empty(); }

private:
    enum class Op : unsigned char { PushConst, PushParam, PushS, Add, Sub, Mul, Div, Neg, PowInt, Exp };
    struct Instr {
        Op op;
        int arg = 0;    // parameter index or integer exponent
        double c = 0.0; // constant payload
    };
    std::vector<Instr> prog_;
    bool uses_s_ = false;
};

} // namespace tds

#endif
