#pragma once

#include <vector>

#include "fihde/grid.hpp"

namespace fihde {

// Euler Gamma function for x > 0, accurate to at least 12 significant digits
// (Lanczos rational approximation; reflection below 1/2).
double gamma_fn(double x);

// The weakly singular convolution kernel s^(gamma-1)/Gamma(gamma) for s > 0,
// zero for s <= 0. Order restricted to (0, 2).
struct Kernel {
    double gamma_order;

    explicit Kernel(double order);
    double operator()(double s) const;
};

// Fractional integral of order alpha in (0, 1] from the left endpoint:
//
//   g(s_i) = (1/Gamma(alpha)) * integral over [s0, s_i] of
//            (s_i - beta)^(alpha-1) f(beta) dbeta
//
// computed by product integration: f is replaced by its piecewise linear
// interpolant and the singular kernel moments are integrated in closed form.
// A plain trapezoid rule on the kernel would lose the convergence order at
// the endpoint singularity. g(s_0) = 0; weights are positive, so f >= 0
// implies g >= 0 node by node.
GridFunction rl_integral(const GridFunction& f, double alpha);

// Fractional derivative of order alpha in (0, 1), realized operator-style as
// d/ds applied to the order-(1-alpha) fractional integral: central
// differences at interior nodes, one-sided three-point stencils at the ends.
// Requires n >= 2.
GridFunction rl_derivative(const GridFunction& f, double alpha);

struct SelfComposeResult {
    GridFunction value;
    std::vector<int> escaped;  // nodes whose inner argument left the interval
};

// g(s_i) = f(f(s_i)) via interpolation. Under Clamp, inner arguments are
// projected onto the interval and the escaped node indices are reported;
// under Strict, any escape raises RangeError listing the offending nodes.
SelfComposeResult self_compose(const GridFunction& f, DomainPolicy policy);

}  // namespace fihde
