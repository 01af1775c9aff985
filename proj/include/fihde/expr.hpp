#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "fihde/errors.hpp"

namespace fihde {

// Parsed scalar expression over the variables s, v, w, where v stands for the
// state value and w for the self-composed value. Immutable after parse; eval
// is pure, so instances are safe to share across threads.
//
// Grammar (conventional precedence): ^ binds tightest and associates right,
// then unary minus, then * /, then + -. Functions: sin cos exp log sqrt abs
// tanh (one argument), min max (two). Whitespace is insignificant.
class Expr {
public:
    Expr() = default;

    // Throws SyntaxError (with byte offset) on malformed text and on unknown
    // identifiers.
    static Expr parse(std::string_view text);

    // IEEE-754 double semantics. Genuine domain faults (log of non-positive,
    // division by zero, sqrt of negative, fractional power of a negative
    // base) raise EvalError naming the subexpression.
    double eval(double s, double v, double w) const;

    // Canonical text form; parsing it back yields a structurally identical
    // tree.
    std::string str() const;

    bool identical(const Expr& other) const;

    bool uses_s() const;
    bool uses_v() const;
    bool uses_w() const;

    bool empty() const { return root_ == nullptr; }

    struct Node;

private:
    std::shared_ptr<const Node> root_;
};

}  // namespace fihde
