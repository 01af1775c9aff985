#include "fihde/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstring>
#include <sstream>
#include <vector>

namespace fihde {

namespace {

enum class Op {
    Const,
    VarS,
    VarV,
    VarW,
    Neg,
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
    Abs,
    Tanh,
    Min,
    Max,
};

const char* call_name(Op op) {
    switch (op) {
        case Op::Sin: return "sin";
        case Op::Cos: return "cos";
        case Op::Exp: return "exp";
        case Op::Log: return "log";
        case Op::Sqrt: return "sqrt";
        case Op::Abs: return "abs";
        case Op::Tanh: return "tanh";
        case Op::Min: return "min";
        case Op::Max: return "max";
        default: return "";
    }
}

}  // namespace

struct Expr::Node {
    Op op = Op::Const;
    double number = 0.0;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

NodePtr make_node(Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
    auto n = std::make_shared<Expr::Node>();
    n->op = op;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

NodePtr make_const(double value) {
    auto n = std::make_shared<Expr::Node>();
    n->op = Op::Const;
    n->number = value;
    return n;
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    NodePtr run() {
        NodePtr e = parse_sum();
        skip_ws();
        if (pos_ != text_.size()) {
            fail("end of input");
        }
        return e;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& expected) {
        std::ostringstream os;
        os << "syntax error at offset " << pos_ << ": expected " << expected;
        throw SyntaxError(os.str(), pos_);
    }

    void skip_ws() {
        while (pos_ < text_.size() &&
               std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr parse_sum() {
        NodePtr lhs = parse_term();
        for (;;) {
            if (eat('+')) {
                lhs = make_node(Op::Add, lhs, parse_term());
            } else if (eat('-')) {
                lhs = make_node(Op::Sub, lhs, parse_term());
            } else {
                return lhs;
            }
        }
    }

    NodePtr parse_term() {
        NodePtr lhs = parse_factor();
        for (;;) {
            if (eat('*')) {
                lhs = make_node(Op::Mul, lhs, parse_factor());
            } else if (eat('/')) {
                lhs = make_node(Op::Div, lhs, parse_factor());
            } else {
                return lhs;
            }
        }
    }

    // factor handles unary minus; power binds tighter, so -x^2 is -(x^2).
    NodePtr parse_factor() {
        if (eat('-')) {
            return make_node(Op::Neg, parse_factor());
        }
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_atom();
        if (eat('^')) {
            // Recurse through factor: right-associative and the exponent may
            // carry its own unary minus (2^-3).
            return make_node(Op::Pow, base, parse_factor());
        }
        return base;
    }

    NodePtr parse_atom() {
        skip_ws();
        if (pos_ >= text_.size()) {
            fail("a number, variable, function, or '('");
        }
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr inner = parse_sum();
            if (!eat(')')) fail("')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            return parse_number();
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            return parse_identifier();
        }
        fail("a number, variable, function, or '('");
    }

    NodePtr parse_number() {
        const char* begin = text_.data() + pos_;
        const char* end = text_.data() + text_.size();
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(begin, end, value);
        if (ec != std::errc{} || ptr == begin) {
            fail("a number");
        }
        pos_ = static_cast<std::size_t>(ptr - text_.data());
        return make_const(value);
    }

    NodePtr parse_identifier() {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                text_[pos_] == '_')) {
            ++pos_;
        }
        std::string_view name = text_.substr(start, pos_ - start);
        if (name == "s") return make_node(Op::VarS);
        if (name == "v") return make_node(Op::VarV);
        if (name == "w") return make_node(Op::VarW);

        struct Fn {
            const char* name;
            Op op;
            int arity;
        };
        static constexpr std::array<Fn, 9> fns{{
            {"sin", Op::Sin, 1},
            {"cos", Op::Cos, 1},
            {"exp", Op::Exp, 1},
            {"log", Op::Log, 1},
            {"sqrt", Op::Sqrt, 1},
            {"abs", Op::Abs, 1},
            {"tanh", Op::Tanh, 1},
            {"min", Op::Min, 2},
            {"max", Op::Max, 2},
        }};
        for (const Fn& fn : fns) {
            if (name == fn.name) {
                if (!eat('(')) fail("'(' after function name");
                NodePtr a = parse_sum();
                NodePtr b;
                if (fn.arity == 2) {
                    if (!eat(',')) fail("',' between function arguments");
                    b = parse_sum();
                }
                if (!eat(')')) fail("')'");
                return make_node(fn.op, a, b);
            }
        }
        std::ostringstream os;
        os << "unknown identifier '" << name << "' at offset " << start
           << " (variables are s, v, w)";
        throw SyntaxError(os.str(), start);
    }
};

std::string format_double(double value) {
    std::array<char, 64> buf;
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    (void)ec;
    return std::string(buf.data(), ptr);
}

int precedence(const Expr::Node& n) {
    switch (n.op) {
        case Op::Add:
        case Op::Sub: return 1;
        case Op::Mul:
        case Op::Div: return 2;
        case Op::Neg: return 3;
        case Op::Pow: return 4;
        default: return 9;  // atoms and calls never need parentheses
    }
}

void print_node(const Expr::Node& n, std::ostream& os);

void print_child(const Expr::Node& child, std::ostream& os, bool parens) {
    if (parens) os << '(';
    print_node(child, os);
    if (parens) os << ')';
}

void print_node(const Expr::Node& n, std::ostream& os) {
    switch (n.op) {
        case Op::Const:
            os << format_double(n.number);
            return;
        case Op::VarS: os << 's'; return;
        case Op::VarV: os << 'v'; return;
        case Op::VarW: os << 'w'; return;
        case Op::Neg:
            os << '-';
            print_child(*n.lhs, os, precedence(*n.lhs) < 3);
            return;
        case Op::Add:
        case Op::Sub:
        case Op::Mul:
        case Op::Div: {
            int p = precedence(n);
            // Right operands of equal precedence get parentheses so the
            // reparsed (left-associative) tree matches this one.
            print_child(*n.lhs, os, precedence(*n.lhs) < p);
            os << ' ' << (n.op == Op::Add ? '+' : n.op == Op::Sub ? '-'
                          : n.op == Op::Mul ? '*' : '/') << ' ';
            print_child(*n.rhs, os, precedence(*n.rhs) <= p);
            return;
        }
        case Op::Pow:
            // Right-associative: parenthesize the base when it binds no
            // tighter than '^' itself.
            print_child(*n.lhs, os, precedence(*n.lhs) <= 4);
            os << '^';
            print_child(*n.rhs, os, precedence(*n.rhs) < 4);
            return;
        default:
            os << call_name(n.op) << '(';
            print_node(*n.lhs, os);
            if (n.rhs) {
                os << ", ";
                print_node(*n.rhs, os);
            }
            os << ')';
            return;
    }
}

std::string describe(const Expr::Node& n) {
    std::ostringstream os;
    print_node(n, os);
    return os.str();
}

double eval_node(const Expr::Node& n, double s, double v, double w) {
    switch (n.op) {
        case Op::Const: return n.number;
        case Op::VarS: return s;
        case Op::VarV: return v;
        case Op::VarW: return w;
        case Op::Neg: return -eval_node(*n.lhs, s, v, w);
        case Op::Add: return eval_node(*n.lhs, s, v, w) + eval_node(*n.rhs, s, v, w);
        case Op::Sub: return eval_node(*n.lhs, s, v, w) - eval_node(*n.rhs, s, v, w);
        case Op::Mul: return eval_node(*n.lhs, s, v, w) * eval_node(*n.rhs, s, v, w);
        case Op::Div: {
            double a = eval_node(*n.lhs, s, v, w);
            double b = eval_node(*n.rhs, s, v, w);
            if (b == 0.0) {
                throw EvalError("division by zero in '" + describe(n) + "'");
            }
            return a / b;
        }
        case Op::Pow: {
            double a = eval_node(*n.lhs, s, v, w);
            double b = eval_node(*n.rhs, s, v, w);
            if (a < 0.0 && b != std::floor(b)) {
                throw EvalError("fractional power of negative base in '" +
                                describe(n) + "'");
            }
            if (a == 0.0 && b < 0.0) {
                throw EvalError("zero raised to a negative power in '" +
                                describe(n) + "'");
            }
            return std::pow(a, b);
        }
        case Op::Sin: return std::sin(eval_node(*n.lhs, s, v, w));
        case Op::Cos: return std::cos(eval_node(*n.lhs, s, v, w));
        case Op::Exp: return std::exp(eval_node(*n.lhs, s, v, w));
        case Op::Log: {
            double a = eval_node(*n.lhs, s, v, w);
            if (a <= 0.0) {
                throw EvalError("log of non-positive value in '" + describe(n) + "'");
            }
            return std::log(a);
        }
        case Op::Sqrt: {
            double a = eval_node(*n.lhs, s, v, w);
            if (a < 0.0) {
                throw EvalError("sqrt of negative value in '" + describe(n) + "'");
            }
            return std::sqrt(a);
        }
        case Op::Abs: return std::fabs(eval_node(*n.lhs, s, v, w));
        case Op::Tanh: return std::tanh(eval_node(*n.lhs, s, v, w));
        case Op::Min:
            return std::fmin(eval_node(*n.lhs, s, v, w), eval_node(*n.rhs, s, v, w));
        case Op::Max:
            return std::fmax(eval_node(*n.lhs, s, v, w), eval_node(*n.rhs, s, v, w));
    }
    throw EvalError("corrupt expression node");
}

bool nodes_identical(const Expr::Node* a, const Expr::Node* b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->op != b->op) return false;
    if (a->op == Op::Const &&
        std::memcmp(&a->number, &b->number, sizeof(double)) != 0) {
        return false;
    }
    return nodes_identical(a->lhs.get(), b->lhs.get()) &&
           nodes_identical(a->rhs.get(), b->rhs.get());
}

bool node_uses(const Expr::Node* n, Op var) {
    if (!n) return false;
    if (n->op == var) return true;
    return node_uses(n->lhs.get(), var) || node_uses(n->rhs.get(), var);
}

}  // namespace

Expr Expr::parse(std::string_view text) {
    Expr e;
    e.root_ = Parser(text).run();
    return e;
}

double Expr::eval(double s, double v, double w) const {
    if (!root_) throw EvalError("evaluating an empty expression");
    return eval_node(*root_, s, v, w);
}

std::string Expr::str() const {
    if (!root_) return "";
    return describe(*root_);
}

bool Expr::identical(const Expr& other) const {
    return nodes_identical(root_.get(), other.root_.get());
}

bool Expr::uses_s() const { return node_uses(root_.get(), Op::VarS); }
bool Expr::uses_v() const { return node_uses(root_.get(), Op::VarV); }
bool Expr::uses_w() const { return node_uses(root_.get(), Op::VarW); }

}  // namespace fihde
