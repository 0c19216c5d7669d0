#include "expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace tds {

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

NodePtr make_node(Expr::Kind k) {
    auto n = std::make_shared<Expr::Node>();
    n->kind = k;
    return n;
}

bool is_const(const NodePtr& n, double v) {
    return n->kind == Expr::Kind::Constant && n->value == v;
}

} // namespace

std::shared_ptr<const Expr::Node> Expr::constant_node(double v) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Constant;
    n->value = v;
    return n;
}

Expr Expr::constant(double v) { return Expr(constant_node(v)); }

Expr Expr::variable(const std::string& name) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Variable;
    n->name = name;
    return Expr(n);
}

Expr operator+(const Expr& x, const Expr& y) {
    if (x.node_->kind == Expr::Kind::Constant && y.node_->kind == Expr::Kind::Constant)
        return Expr::constant(x.node_->value + y.node_->value);
    if (is_const(x.node_, 0.0)) return y;
    if (is_const(y.node_, 0.0)) return x;
    auto n = make_node(Expr::Kind::Add);
    const_cast<Expr::Node*>(n.get())->a = x.node_;
    const_cast<Expr::Node*>(n.get())->b = y.node_;
    return Expr(n);
}

Expr operator-(const Expr& x, const Expr& y) {
    if (x.node_->kind == Expr::Kind::Constant && y.node_->kind == Expr::Kind::Constant)
        return Expr::constant(x.node_->value - y.node_->value);
    if (is_const(y.node_, 0.0)) return x;
    if (is_const(x.node_, 0.0)) return -y;
    auto n = make_node(Expr::Kind::Sub);
    const_cast<Expr::Node*>(n.get())->a = x.node_;
    const_cast<Expr::Node*>(n.get())->b = y.node_;
    return Expr(n);
}

Expr operator*(const Expr& x, const Expr& y) {
    if (x.node_->kind == Expr::Kind::Constant && y.node_->kind == Expr::Kind::Constant)
        return Expr::constant(x.node_->value * y.node_->value);
    if (is_const(x.node_, 0.0) || is_const(y.node_, 0.0)) return Expr::constant(0.0);
    if (is_const(x.node_, 1.0)) return y;
    if (is_const(y.node_, 1.0)) return x;
    auto n = make_node(Expr::Kind::Mul);
    const_cast<Expr::Node*>(n.get())->a = x.node_;
    const_cast<Expr::Node*>(n.get())->b = y.node_;
    return Expr(n);
}

Expr operator/(const Expr& x, const Expr& y) {
    if (x.node_->kind == Expr::Kind::Constant && y.node_->kind == Expr::Kind::Constant &&
        y.node_->value != 0.0)
        return Expr::constant(x.node_->value / y.node_->value);
    if (is_const(y.node_, 1.0)) return x;
    auto n = make_node(Expr::Kind::Div);
    const_cast<Expr::Node*>(n.get())->a = x.node_;
    const_cast<Expr::Node*>(n.get())->b = y.node_;
    return Expr(n);
}

Expr operator-(const Expr& x) {
    if (x.node_->kind == Expr::Kind::Constant) return Expr::constant(-x.node_->value);
    if (x.node_->kind == Expr::Kind::Neg) return Expr(x.node_->a);
    auto n = make_node(Expr::Kind::Neg);
    const_cast<Expr::Node*>(n.get())->a = x.node_;
    return Expr(n);
}

Expr Expr::pow(const Expr& x, long n) {
    if (n == 0) return constant(1.0);
    if (n == 1) return x;
    if (x.node_->kind == Kind::Constant) return constant(std::pow(x.node_->value, double(n)));
    auto nd = make_node(Kind::Pow);
    const_cast<Node*>(nd.get())->a = x.node_;
    const_cast<Node*>(nd.get())->exponent = n;
    return Expr(nd);
}

Expr Expr::exp(const Expr& x) {
    if (x.node_->kind == Kind::Constant) return constant(std::exp(x.node_->value));
    auto n = make_node(Kind::Exp);
    const_cast<Node*>(n.get())->a = x.node_;
    return Expr(n);
}

// ---------------------------------------------------------------------------
// Parser

namespace {

struct Token {
    enum class Type { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };
    Type type;
    std::size_t offset;
    double value = 0.0;       // Number
    bool integral = false;    // Number consisted of digits only
    std::string text;         // Ident / raw number text
};

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) { advance(); }

    const Token& peek() const { return tok_; }
    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) pos_++;
        tok_.offset = pos_;
        tok_.text.clear();
        if (pos_ >= text_.size()) {
            tok_.type = Token::Type::End;
            return;
        }
        char c = text_[pos_];
        switch (c) {
        case '+': tok_.type = Token::Type::Plus; pos_++; return;
        case '-': tok_.type = Token::Type::Minus; pos_++; return;
        case '*': tok_.type = Token::Type::Star; pos_++; return;
        case '/': tok_.type = Token::Type::Slash; pos_++; return;
        case '^': tok_.type = Token::Type::Caret; pos_++; return;
        case '(': tok_.type = Token::Type::LParen; pos_++; return;
        case ')': tok_.type = Token::Type::RParen; pos_++; return;
        default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t start = pos_;
            bool digits_only = true;
            while (pos_ < text_.size() &&
                   (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
                if (text_[pos_] == '.') digits_only = false;
                pos_++;
            }
            // exponent notation
            if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
                std::size_t save = pos_;
                pos_++;
                if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) pos_++;
                if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                    digits_only = false;
                    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                        pos_++;
                } else {
                    pos_ = save; // 'e' belongs to an identifier that follows
                }
            }
            tok_.type = Token::Type::Number;
            tok_.text = std::string(text_.substr(start, pos_ - start));
            tok_.integral = digits_only;
            try {
                tok_.value = std::stod(tok_.text);
            } catch (const std::exception&) {
                throw ParseError(start, "number", "malformed number at offset " + std::to_string(start));
            }
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                pos_++;
            tok_.type = Token::Type::Ident;
            tok_.text = std::string(text_.substr(start, pos_ - start));
            return;
        }
        throw ParseError(pos_, "number, identifier, operator, or parenthesis",
                         std::string("unexpected character '") + c + "' at offset " +
                             std::to_string(pos_));
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    Token tok_;
};

class Parser {
public:
    explicit Parser(std::string_view text) : lex_(text) {}

    Expr parse() {
        Expr e = expression();
        if (lex_.peek().type != Token::Type::End)
            fail("operator or end of input");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& expected) {
        const Token& t = lex_.peek();
        throw ParseError(t.offset, expected,
                         "syntax error at offset " + std::to_string(t.offset) + ": expected " +
                             expected);
    }

    Expr expression() {
        Expr e = term();
        while (true) {
            auto t = lex_.peek().type;
            if (t == Token::Type::Plus) {
                lex_.take();
                e = e + term();
            } else if (t == Token::Type::Minus) {
                lex_.take();
                e = e - term();
            } else {
                return e;
            }
        }
    }

    Expr term() {
        Expr e = factor();
        while (true) {
            auto t = lex_.peek().type;
            if (t == Token::Type::Star) {
                lex_.take();
                e = e * factor();
            } else if (t == Token::Type::Slash) {
                lex_.take();
                e = e / factor();
            } else {
                return e;
            }
        }
    }

    Expr factor() {
        if (lex_.peek().type == Token::Type::Minus) {
            lex_.take();
            return -factor();
        }
        return power();
    }

    Expr power() {
        Expr base = primary();
        if (lex_.peek().type == Token::Type::Caret) {
            lex_.take();
            long sign = 1;
            if (lex_.peek().type == Token::Type::Minus) {
                lex_.take();
                sign = -1;
            } else if (lex_.peek().type == Token::Type::Plus) {
                lex_.take();
            }
            const Token& t = lex_.peek();
            if (t.type != Token::Type::Number || !t.integral)
                fail("integer exponent");
            Token num = lex_.take();
            long n = std::strtol(num.text.c_str(), nullptr, 10);
            if (std::llabs(n) > 64)
                throw ParseError(num.offset, "exponent with magnitude <= 64",
                                 "exponent too large at offset " + std::to_string(num.offset));
            return Expr::pow(base, sign * n);
        }
        return base;
    }

    Expr primary() {
        const Token& t = lex_.peek();
        switch (t.type) {
        case Token::Type::Number: {
            Token num = lex_.take();
            return Expr::constant(num.value);
        }
        case Token::Type::Ident: {
            Token id = lex_.take();
            if (id.text == "exp") {
                if (lex_.peek().type != Token::Type::LParen) fail("'(' after exp");
                lex_.take();
                Expr arg = expression();
                if (lex_.peek().type != Token::Type::RParen) fail("')'");
                lex_.take();
                return Expr::exp(arg);
            }
            return Expr::variable(id.text);
        }
        case Token::Type::LParen: {
            lex_.take();
            Expr e = expression();
            if (lex_.peek().type != Token::Type::RParen) fail("')'");
            lex_.take();
            return e;
        }
        default:
            fail("number, identifier, 'exp', '(', or '-'");
        }
    }

    Lexer lex_;
};

} // namespace

Expr Expr::parse(std::string_view text) {
    if (text.empty()) throw ParseError(0, "non-empty expression", "empty expression");
    return Parser(text).parse();
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

std::string node_to_string(const Expr::Node* n);

std::complex<double> eval_node(const Expr::Node* n, std::complex<double> s,
                               const std::map<std::string, double>& params, bool allow_s) {
    using K = Expr::Kind;
    switch (n->kind) {
    case K::Constant: return n->value;
    case K::Variable: {
        if (n->name == "s") {
            if (!allow_s)
                throw Error(ErrorCode::Invalid,
                            "Laplace symbol 's' not allowed in a parameter-only expression");
            return s;
        }
        auto it = params.find(n->name);
        if (it == params.end())
            throw Error(ErrorCode::Invalid, "unbound variable '" + n->name + "'");
        return it->second;
    }
    case K::Add: return eval_node(n->a.get(), s, params, allow_s) + eval_node(n->b.get(), s, params, allow_s);
    case K::Sub: return eval_node(n->a.get(), s, params, allow_s) - eval_node(n->b.get(), s, params, allow_s);
    case K::Mul: return eval_node(n->a.get(), s, params, allow_s) * eval_node(n->b.get(), s, params, allow_s);
    case K::Div: {
        auto num = eval_node(n->a.get(), s, params, allow_s);
        auto den = eval_node(n->b.get(), s, params, allow_s);
        if (den == std::complex<double>(0.0, 0.0))
            throw Error(ErrorCode::Invalid,
                        "division by zero while evaluating '" + node_to_string(n->b.get()) + "'");
        return num / den;
    }
    case K::Neg: return -eval_node(n->a.get(), s, params, allow_s);
    case K::Pow: {
        auto base = eval_node(n->a.get(), s, params, allow_s);
        long e = n->exponent;
        bool invert = e < 0;
        std::complex<double> r = 1.0;
        for (long i = 0; i < std::labs(e); i++) r *= base;
        if (invert) {
            if (r == std::complex<double>(0.0, 0.0))
                throw Error(ErrorCode::Invalid, "zero raised to a negative power");
            return 1.0 / r;
        }
        return r;
    }
    case K::Exp: return std::exp(eval_node(n->a.get(), s, params, allow_s));
    }
    throw Error(ErrorCode::Internal, "corrupt expression node");
}

} // namespace

std::complex<double> Expr::eval(std::complex<double> s,
                                const std::map<std::string, double>& params) const {
    return eval_node(node_.get(), s, params, true);
}

double Expr::eval_real(const std::map<std::string, double>& params) const {
    return eval_node(node_.get(), 0.0, params, false).real();
}

// ---------------------------------------------------------------------------
// Differentiation

Expr Expr::diff(const std::string& var) const {
    using K = Kind;
    const Node* n = node_.get();
    switch (n->kind) {
    case K::Constant: return constant(0.0);
    case K::Variable: return constant(n->name == var ? 1.0 : 0.0);
    case K::Add: return Expr(n->a).diff(var) + Expr(n->b).diff(var);
    case K::Sub: return Expr(n->a).diff(var) - Expr(n->b).diff(var);
    case K::Mul:
        return Expr(n->a).diff(var) * Expr(n->b) + Expr(n->a) * Expr(n->b).diff(var);
    case K::Div:
        return (Expr(n->a).diff(var) * Expr(n->b) - Expr(n->a) * Expr(n->b).diff(var)) /
               (Expr(n->b) * Expr(n->b));
    case K::Neg: return -Expr(n->a).diff(var);
    case K::Pow:
        return constant(double(n->exponent)) * pow(Expr(n->a), n->exponent - 1) *
               Expr(n->a).diff(var);
    case K::Exp: return exp(Expr(n->a)) * Expr(n->a).diff(var);
    }
    throw Error(ErrorCode::Internal, "corrupt expression node");
}

// ---------------------------------------------------------------------------
// Printing / inspection

namespace {

int precedence(Expr::Kind k) {
    switch (k) {
    case Expr::Kind::Add:
    case Expr::Kind::Sub: return 1;
    case Expr::Kind::Mul:
    case Expr::Kind::Div: return 2;
    case Expr::Kind::Neg: return 3;
    case Expr::Kind::Pow: return 4;
    default: return 5;
    }
}

void print_node(std::ostringstream& out, const Expr::Node* n, int parent_prec) {
    int prec = precedence(n->kind);
    bool paren = prec < parent_prec;
    if (paren) out << '(';
    switch (n->kind) {
    case Expr::Kind::Constant: {
        if (n->value < 0) {
            out << '(' << n->value << ')';
        } else {
            std::ostringstream v;
            v.precision(17);
            v << n->value;
            out << v.str();
        }
        break;
    }
    case Expr::Kind::Variable: out << n->name; break;
    case Expr::Kind::Add:
        print_node(out, n->a.get(), prec);
        out << " + ";
        print_node(out, n->b.get(), prec);
        break;
    case Expr::Kind::Sub:
        print_node(out, n->a.get(), prec);
        out << " - ";
        print_node(out, n->b.get(), prec + 1);
        break;
    case Expr::Kind::Mul:
        print_node(out, n->a.get(), prec);
        out << "*";
        print_node(out, n->b.get(), prec);
        break;
    case Expr::Kind::Div:
        print_node(out, n->a.get(), prec);
        out << "/";
        print_node(out, n->b.get(), prec + 1);
        break;
    case Expr::Kind::Neg:
        out << "-";
        print_node(out, n->a.get(), prec);
        break;
    case Expr::Kind::Pow:
        print_node(out, n->a.get(), prec + 1);
        out << "^" << n->exponent;
        break;
    case Expr::Kind::Exp:
        out << "exp(";
        print_node(out, n->a.get(), 0);
        out << ")";
        break;
    }
    if (paren) out << ')';
}

std::string node_to_string(const Expr::Node* n) {
    std::ostringstream out;
    out.precision(17);
    print_node(out, n, 0);
    return out.str();
}

void collect_vars(const Expr::Node* n, std::set<std::string>& out) {
    if (n->kind == Expr::Kind::Variable) out.insert(n->name);
    if (n->a) collect_vars(n->a.get(), out);
    if (n->b) collect_vars(n->b.get(), out);
}

} // namespace

std::string Expr::str() const {
    std::ostringstream out;
    out.precision(17);
    print_node(out, node_.get(), 0);
    return out.str();
}

std::set<std::string> Expr::free_vars() const {
    std::set<std::string> vars;
    collect_vars(node_.get(), vars);
    return vars;
}

bool Expr::uses(const std::string& name) const {
    return free_vars().count(name) > 0;
}

namespace {
bool same_node(const Expr::Node* a, const Expr::Node* b) {
    if (a == b) return true;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
    case Expr::Kind::Constant: return a->value == b->value;
    case Expr::Kind::Variable: return a->name == b->name;
    case Expr::Kind::Pow:
        return a->exponent == b->exponent && same_node(a->a.get(), b->a.get());
    case Expr::Kind::Neg:
    case Expr::Kind::Exp: return same_node(a->a.get(), b->a.get());
    default: return same_node(a->a.get(), b->a.get()) && same_node(a->b.get(), b->b.get());
    }
}
} // namespace

bool Expr::same_tree(const Expr& other) const { return same_node(node_.get(), other.node_.get()); }

// ---------------------------------------------------------------------------
// Compilation

CompiledExpr::CompiledExpr(const Expr& e, const std::vector<std::string>& param_names) {
    struct Builder {
        std::vector<Instr>& prog;
        const std::vector<std::string>& names;
        bool& uses_s;
        void walk(const Expr::Node* n) {
            using K = Expr::Kind;
            switch (n->kind) {
            case K::Constant: prog.push_back({Op::PushConst, 0, n->value}); return;
            case K::Variable: {
                if (n->name == "s") {
                    uses_s = true;
                    prog.push_back({Op::PushS, 0, 0.0});
                    return;
                }
                for (std::size_t i = 0; i < names.size(); i++) {
                    if (names[i] == n->name) {
                        prog.push_back({Op::PushParam, int(i), 0.0});
                        return;
                    }
                }
                throw Error(ErrorCode::Invalid,
                            "variable '" + n->name + "' is not a declared parameter");
            }
            case K::Add: walk(n->a.get()); walk(n->b.get()); prog.push_back({Op::Add, 0, 0.0}); return;
            case K::Sub: walk(n->a.get()); walk(n->b.get()); prog.push_back({Op::Sub, 0, 0.0}); return;
            case K::Mul: walk(n->a.get()); walk(n->b.get()); prog.push_back({Op::Mul, 0, 0.0}); return;
            case K::Div: walk(n->a.get()); walk(n->b.get()); prog.push_back({Op::Div, 0, 0.0}); return;
            case K::Neg: walk(n->a.get()); prog.push_back({Op::Neg, 0, 0.0}); return;
            case K::Pow: walk(n->a.get()); prog.push_back({Op::PowInt, int(n->exponent), 0.0}); return;
            case K::Exp: walk(n->a.get()); prog.push_back({Op::Exp, 0, 0.0}); return;
            }
        }
    };
    Builder b{prog_, param_names, uses_s_};
    b.walk(e.node().get());
}

namespace {

template <typename T> T pow_n(T base, long n, bool* zero_neg) {
    if (n < 0) {
        T r = pow_n(base, -n, zero_neg);
        if (r == T(0.0)) {
            *zero_neg = true;
            return T(0.0);
        }
        return T(1.0) / r;
    }
    T r(1.0);
    for (long i = 0; i < n; i++) r *= base;
    return r;
}

} // namespace

std::complex<double> CompiledExpr::eval(std::complex<double> s,
                                        std::span<const double> params) const {
    std::complex<double> stack[32];
    int top = -1;
    for (const Instr& in : prog_) {
        switch (in.op) {
        case Op::PushConst: stack[++top] = in.c; break;
        case Op::PushParam: stack[++top] = params[std::size_t(in.arg)]; break;
        case Op::PushS: stack[++top] = s; break;
        case Op::Add: top--; stack[top] += stack[top + 1]; break;
        case Op::Sub: top--; stack[top] -= stack[top + 1]; break;
        case Op::Mul: top--; stack[top] *= stack[top + 1]; break;
        case Op::Div:
            top--;
            if (stack[top + 1] == std::complex<double>(0.0, 0.0))
                throw Error(ErrorCode::Invalid, "division by zero in compiled expression");
            stack[top] /= stack[top + 1];
            break;
        case Op::Neg: stack[top] = -stack[top]; break;
        case Op::PowInt: {
            bool zero_neg = false;
            stack[top] = pow_n(stack[top], in.arg, &zero_neg);
            if (zero_neg)
                throw Error(ErrorCode::Invalid, "zero raised to a negative power");
            break;
        }
        case Op::Exp: stack[top] = std::exp(stack[top]); break;
        }
    }
    return top >= 0 ? stack[0] : std::complex<double>(0.0, 0.0);
}

double CompiledExpr::eval_real(std::span<const double> params) const {
    if (uses_s_)
        throw Error(ErrorCode::Invalid, "parameter-only evaluation of an expression using 's'");
    double stack[32];
    int top = -1;
    for (const Instr& in : prog_) {
        switch (in.op) {
        case Op::PushConst: stack[++top] = in.c; break;
        case Op::PushParam: stack[++top] = params[std::size_t(in.arg)]; break;
        case Op::PushS: stack[++top] = 0.0; break; // unreachable
        case Op::Add: top--; stack[top] += stack[top + 1]; break;
        case Op::Sub: top--; stack[top] -= stack[top + 1]; break;
        case Op::Mul: top--; stack[top] *= stack[top + 1]; break;
        case Op::Div:
            top--;
            if (stack[top + 1] == 0.0)
                throw Error(ErrorCode::Invalid, "division by zero in compiled expression");
            stack[top] /= stack[top + 1];
            break;
        case Op::Neg: stack[top] = -stack[top]; break;
        case Op::PowInt: {
            bool zero_neg = false;
            stack[top] = pow_n(stack[top], in.arg, &zero_neg);
            if (zero_neg)
                throw Error(ErrorCode::Invalid, "zero raised to a negative power");
            break;
        }
        case Op::Exp: stack[top] = std::exp(stack[top]); break;
        }
    }
    return top >= 0 ? stack[0] : 0.0;
}

Interval CompiledExpr::eval_interval(std::span<const Interval> params) const {
    if (uses_s_)
        throw Error(ErrorCode::Invalid, "interval evaluation of an expression using 's'");
    Interval stack[32];
    int top = -1;
    for (const Instr& in : prog_) {
        switch (in.op) {
        case Op::PushConst: stack[++top] = Interval(in.c); break;
        case Op::PushParam: stack[++top] = params[std::size_t(in.arg)]; break;
        case Op::PushS: stack[++top] = Interval(0.0); break; // unreachable
        case Op::Add: top--; stack[top] = stack[top] + stack[top + 1]; break;
        case Op::Sub: top--; stack[top] = stack[top] - stack[top + 1]; break;
        case Op::Mul: top--; stack[top] = stack[top] * stack[top + 1]; break;
        case Op::Div: top--; stack[top] = stack[top] / stack[top + 1]; break;
        case Op::Neg: stack[top] = -stack[top]; break;
        case Op::PowInt: stack[top] = pow_int(stack[top], in.arg); break;
        case Op::Exp: stack[top] = exp(stack[top]); break;
        }
    }
    return top >= 0 ? stack[0] : Interval(0.0);
}

} // namespace tds
