#include "fihde/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fihde/fraccalc.hpp"

namespace fihde {

void SolverConfig::validate() const {
    if (!(tol > 0.0)) throw ConfigError("solver tol must be positive");
    if (!(inner_tol > 0.0)) throw ConfigError("inner_tol must be positive");
    if (max_outer < 1 || max_inner < 1) {
        throw ConfigError("iteration caps must be at least 1");
    }
    if (!(relaxation > 0.0 && relaxation <= 1.0)) {
        throw ConfigError("relaxation must lie in (0, 1]");
    }
}

namespace {

void require_problem_grid(const ProblemSpec& p, const GridFunction& v,
                          const char* context) {
    const Grid& g = v.grid();
    double scale = std::max({1.0, std::fabs(p.s0), p.length});
    double eps = 1e-12 * scale;
    if (std::fabs(g.s0 - p.s0) > eps || std::fabs(g.length - p.length) > eps) {
        std::ostringstream os;
        os << context << ": grid interval [" << g.s0 << ", " << g.end()
           << "] does not match the problem interval [" << p.s0 << ", "
           << p.s0 + p.length << "]";
        throw DataError(os.str());
    }
}

double initial_constant(const ProblemSpec& p, const GridFunction& v) {
    // The composed slot at the initial node reads the current iterate at
    // clamp(v0); residual() uses the same convention.
    return p.v0 - p.psi_at(p.s0, p.v0, v.eval_clamped(p.v0));
}

GridFunction assemble_rhs(const ProblemSpec& p, const GridFunction& v,
                          const GridFunction& composed, const GridFunction& forcing) {
    const Grid& g = v.grid();
    const double c = initial_constant(p, v);
    std::vector<double> out(static_cast<std::size_t>(g.n) + 1);
    for (int i = 0; i <= g.n; ++i) {
        out[static_cast<std::size_t>(i)] =
            c + p.psi_at(g.node(i), v[i], composed[i]) + forcing[i];
    }
    return v.with_values(std::move(out));
}

}  // namespace

LoadResult compute_load(const ProblemSpec& p, const GridFunction& v) {
    SelfComposeResult comp = self_compose(v, p.policy);
    const Grid& g = v.grid();
    std::vector<double> load(static_cast<std::size_t>(g.n) + 1);
    for (int i = 0; i <= g.n; ++i) {
        load[static_cast<std::size_t>(i)] = p.aleph_at(g.node(i), v[i], comp.value[i]);
    }
    return LoadResult{v.with_values(std::move(load)),
                      static_cast<int>(comp.escaped.size())};
}

GridFunction fihie_rhs(const ProblemSpec& p, const GridFunction& v,
                       const GridFunction& forcing) {
    p.validate();
    require_problem_grid(p, v, "fihie_rhs");
    require_same_grid(v, forcing, "fihie_rhs");
    SelfComposeResult comp = self_compose(v, p.policy);
    return assemble_rhs(p, v, comp.value, forcing);
}

GridFunction fihie_rhs(const ProblemSpec& p, const GridFunction& v) {
    p.validate();
    require_problem_grid(p, v, "fihie_rhs");
    LoadResult lr = compute_load(p, v);
    GridFunction forcing = rl_integral(lr.load, p.alpha);
    SelfComposeResult comp = self_compose(v, p.policy);
    return assemble_rhs(p, v, comp.value, forcing);
}

std::pair<GridFunction, SolveReport> solve_fihie(const ProblemSpec& p,
                                                 const SolverConfig& cfg,
                                                 const GridFunction& v_init) {
    p.validate();
    cfg.validate();
    require_problem_grid(p, v_init, "solve_fihie");

    GridFunction v = v_init;
    SolveReport report;
    report.apriori_radius = apriori_radius(p);

    double lambda = cfg.relaxation;
    double prev_diff = std::numeric_limits<double>::infinity();
    int non_contracting = 0;
    bool damped = false;

    for (int k = 0; k < cfg.max_outer; ++k) {
        LoadResult lr = compute_load(p, v);
        GridFunction forcing = rl_integral(lr.load, p.alpha);
        SelfComposeResult comp = self_compose(v, p.policy);
        GridFunction g = assemble_rhs(p, v, comp.value, forcing);

        report.residual_history.push_back(sup_diff(v, g));

        std::vector<double> next(v.values());
        for (int i = 0; i < v.size(); ++i) {
            next[static_cast<std::size_t>(i)] =
                (1.0 - lambda) * v[i] + lambda * g[i];
        }
        GridFunction v_next = v.with_values(std::move(next));
        double diff = sup_diff(v_next, v);
        report.outer_iters = k + 1;

        if (std::isfinite(prev_diff) && prev_diff > 0.0) {
            report.contraction_estimate = diff / prev_diff;
        }
        if (diff >= prev_diff) {
            if (++non_contracting >= 10 && !damped) {
                lambda = 0.5 * cfg.relaxation;
                damped = true;
            }
        }
        prev_diff = diff;
        v = std::move(v_next);

        if (diff <= cfg.tol) {
            report.converged = true;
            break;
        }
    }

    // Residual of the iterate actually returned.
    LoadResult lr = compute_load(p, v);
    report.escape_nodes = lr.escapes;
    GridFunction forcing = rl_integral(lr.load, p.alpha);
    SelfComposeResult comp = self_compose(v, p.policy);
    GridFunction g = assemble_rhs(p, v, comp.value, forcing);
    report.final_residual = sup_diff(v, g);
    report.residual_history.push_back(report.final_residual);

    return {std::move(v), std::move(report)};
}

double residual(const ProblemSpec& p, const GridFunction& v) {
    return sup_diff(v, fihie_rhs(p, v));
}

GridFunction solve_implicit_pointwise(const ProblemSpec& p, const GridFunction& g,
                                      const SolverConfig& cfg) {
    p.validate();
    cfg.validate();
    require_problem_grid(p, g, "solve_implicit_pointwise");

    const Grid& grid = g.grid();
    GridFunction x = g;
    double lambda = cfg.relaxation;
    double prev_diff = std::numeric_limits<double>::infinity();
    int non_contracting = 0;
    bool damped = false;
    double diff = std::numeric_limits<double>::infinity();

    for (int j = 0; j < cfg.max_inner; ++j) {
        SelfComposeResult comp = self_compose(x, p.policy);
        std::vector<double> next(static_cast<std::size_t>(grid.n) + 1);
        for (int i = 0; i <= grid.n; ++i) {
            double y = g[i] + p.psi_at(grid.node(i), x[i], comp.value[i]);
            next[static_cast<std::size_t>(i)] = (1.0 - lambda) * x[i] + lambda * y;
        }
        GridFunction x_next = x.with_values(std::move(next));
        diff = sup_diff(x_next, x);
        x = std::move(x_next);
        if (diff <= cfg.inner_tol) {
            return x;
        }
        if (diff >= prev_diff) {
            if (++non_contracting >= 10 && !damped) {
                lambda = 0.5 * cfg.relaxation;
                damped = true;
            }
        }
        prev_diff = diff;
    }

    std::ostringstream os;
    os << "implicit pointwise solve did not reach " << cfg.inner_tol << " within "
       << cfg.max_inner << " iterations (last step " << diff << ")";
    throw SolverError(os.str(), diff);
}

}  // namespace fihde
