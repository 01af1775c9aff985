#pragma once

#include <utility>
#include <vector>

#include "fihde/problem.hpp"

namespace fihde {

struct SolverConfig {
    double tol = 1e-10;       // sup-norm stopping tolerance for the outer sweep
    int max_outer = 200;
    int max_inner = 100;
    double inner_tol = 1e-12;
    double relaxation = 1.0;  // damping of the update, in (0, 1]

    void validate() const;
};

struct SolveReport {
    bool converged = false;
    int outer_iters = 0;
    // Integral-form residual per outer step; the last entry is the residual
    // of the returned iterate, duplicated in final_residual.
    std::vector<double> residual_history;
    double final_residual = 0.0;
    int escape_nodes = 0;  // composition escapes in the returned iterate
    // Last observed step-size ratio |v_{k+1}-v_k| / |v_k-v_{k-1}|.
    double contraction_estimate = 0.0;
    double apriori_radius = 0.0;
};

// One application of the integral-form right side:
//
//   G(v)(s) = [v0 - psi(s0, v0, v(clamp(v0)))] + psi(s, v(s), v(v(s))) + forcing(s)
//
// where forcing is I^alpha of the load aleph(., v, v o v). The overload
// without forcing computes it from v.
GridFunction fihie_rhs(const ProblemSpec& p, const GridFunction& v,
                       const GridFunction& forcing);
GridFunction fihie_rhs(const ProblemSpec& p, const GridFunction& v);

// Damped Picard sweep on the integral form: v_{k+1} = (1-l) v_k + l G(v_k),
// refreshing the forcing each step. Non-convergence is reported in the
// SolveReport, not thrown; the best iterate is still returned. The damping
// drops to half its configured value once ten non-contracting steps
// accumulate (a deterministic rescue for borderline cases).
std::pair<GridFunction, SolveReport> solve_fihie(const ProblemSpec& p,
                                                 const SolverConfig& cfg,
                                                 const GridFunction& v_init);

// Sup-norm defect of the integral form, |v - G(v)|; zero for an exact
// discrete solution.
double residual(const ProblemSpec& p, const GridFunction& v);

// Solves w(s) = g(s) + psi(s, w(s), w(w(s))) on the grid of g by damped
// fixed-point iteration to inner_tol. Unique under the saturating Lipschitz
// hypothesis on psi. Throws SolverError (carrying the residual) when
// max_inner is exhausted.
GridFunction solve_implicit_pointwise(const ProblemSpec& p, const GridFunction& g,
                                      const SolverConfig& cfg);

// Load vector aleph(s_i, v_i, (v o v)_i) together with the escape count of
// the composition; shared by the solver and the bracketing iteration.
struct LoadResult {
    GridFunction load;
    int escapes;
};
LoadResult compute_load(const ProblemSpec& p, const GridFunction& v);

}  // namespace fihde
