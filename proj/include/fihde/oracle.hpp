#pragma once

#include <functional>
#include <vector>

#include "fihde/problem.hpp"

namespace fihde {

// Brute-force reference implementations used to generate and refresh golden
// values. They share the defining formulas with the production code but not
// its code path: straightforward per-panel loops, closed-form kernel moments
// assembled directly and linear interpolation inline. Fully deterministic.

struct OracleConfig {
    // Keep dense_n at least 8x the production grid a result is compared to.
    int dense_n = 8192;
    double dense_tol = 1e-12;
    int max_outer = 400;
    int stride = 16;  // node subsampling when a golden curve is written

    void validate() const;
};

// Fractional integral of order alpha at every node of the dense grid, by
// integrating the singular kernel exactly against the piecewise linear
// interpolant, panel by panel.
std::vector<double> oracle_rl_integral(const std::function<double(double)>& f,
                                       double alpha, const Grid& dense);

// Same quadrature applied to sampled values.
std::vector<double> oracle_rl_integral_values(const std::vector<double>& f,
                                              double alpha, const Grid& dense);

struct OracleSolveResult {
    Grid grid;
    std::vector<double> values;
    int iterations = 0;
    double final_diff = 0.0;
};

// Undamped Picard sweep of the integral equation at dense resolution.
// Refuses (throws SolverError) when dense_tol is not reached: golden values
// are only ever produced from a converged dense run.
OracleSolveResult oracle_solve(const ProblemSpec& p, const OracleConfig& cfg);

// Bisection for x = g(x) on [lo, hi] to 1e-12; requires a sign change of
// x - g(x) across the bracket.
double oracle_scalar_fixed_point(const std::function<double(double)>& g, double lo,
                                 double hi);

}  // namespace fihde
