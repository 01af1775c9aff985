#include "fihde/monotone.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fihde/fraccalc.hpp"

namespace fihde {

double default_tol_defect() { return 1e-6; }

double tol_order(const SolverConfig& cfg, const Grid& grid) {
    double h = grid.h();
    return 10.0 * (cfg.tol + h * h);
}

namespace {

struct SplitLoad {
    GridFunction load;
    int escapes;
};

// aleph1 evaluated along one curve, aleph2 along the other, each with its
// own self-composition in the third slot.
SplitLoad split_load(const ProblemSpec& p, const GridFunction& a1_src,
                     const GridFunction& a2_src) {
    SelfComposeResult c1 = self_compose(a1_src, p.policy);
    SelfComposeResult c2 = self_compose(a2_src, p.policy);
    const Grid& g = a1_src.grid();
    std::vector<double> load(static_cast<std::size_t>(g.n) + 1);
    for (int i = 0; i <= g.n; ++i) {
        double s = g.node(i);
        load[static_cast<std::size_t>(i)] = p.aleph1.eval(s, a1_src[i], c1.value[i]) +
                                            p.aleph2.eval(s, a2_src[i], c2.value[i]);
    }
    return SplitLoad{a1_src.with_values(std::move(load)),
                     static_cast<int>(c1.escaped.size() + c2.escaped.size())};
}

// d_i = D^alpha[cand - psi(s, cand, cand o cand)](s_i) - load_i
std::vector<double> defect_curve(const ProblemSpec& p, const GridFunction& cand,
                                 const GridFunction& load) {
    SelfComposeResult comp = self_compose(cand, p.policy);
    const Grid& g = cand.grid();
    std::vector<double> inner(static_cast<std::size_t>(g.n) + 1);
    for (int i = 0; i <= g.n; ++i) {
        inner[static_cast<std::size_t>(i)] =
            cand[i] - p.psi_at(g.node(i), cand[i], comp.value[i]);
    }
    GridFunction deriv = rl_derivative(cand.with_values(std::move(inner)), p.alpha);
    std::vector<double> d(static_cast<std::size_t>(g.n) + 1);
    for (int i = 0; i <= g.n; ++i) {
        d[static_cast<std::size_t>(i)] = deriv[i] - load[i];
    }
    return d;
}

// Judged at interior nodes only; the one-sided endpoint stencils of the
// discrete derivative are not trusted for sign checks.
SideDefect make_side(std::vector<double> d, bool leq_side, double tol) {
    SideDefect side;
    int n = static_cast<int>(d.size()) - 1;
    side.worst = leq_side ? -std::numeric_limits<double>::infinity()
                          : std::numeric_limits<double>::infinity();
    for (int i = 1; i < n; ++i) {
        double x = d[static_cast<std::size_t>(i)];
        if (leq_side ? (x > side.worst) : (x < side.worst)) {
            side.worst = x;
            side.worst_node = i;
        }
    }
    side.pass = leq_side ? (side.worst <= tol) : (side.worst >= -tol);
    side.defect = std::move(d);
    return side;
}

double interior_abs_max(const std::vector<double>& d) {
    double m = 0.0;
    int n = static_cast<int>(d.size()) - 1;
    for (int i = 1; i < n; ++i) {
        m = std::max(m, std::fabs(d[static_cast<std::size_t>(i)]));
    }
    return m;
}

}  // namespace

LowerUpperReport verify_lower_upper(const ProblemSpec& p, const GridFunction& candidate,
                                    Role role, double tol_defect) {
    p.validate();
    LoadResult lr = compute_load(p, candidate);
    std::vector<double> d = defect_curve(p, candidate, lr.load);

    LowerUpperReport rep;
    rep.role = role;
    rep.tol_defect = tol_defect;
    rep.endpoint_value = candidate[0];
    rep.v0 = p.v0;
    // Lower pairs the >= defect with candidate(s0) >= v0; Upper the reverse.
    bool leq_side = (role == Role::Upper);
    rep.side = make_side(std::move(d), leq_side, tol_defect);
    rep.side.endpoint_ok = (role == Role::Lower)
                               ? candidate[0] >= p.v0 - tol_defect
                               : candidate[0] <= p.v0 + tol_defect;
    return rep;
}

MixedPairReport verify_mixed_pair(const ProblemSpec& p, const GridFunction& sigma,
                                  const GridFunction& rho, MixedKind kind,
                                  double tol_defect) {
    p.validate();
    require_same_grid(sigma, rho, "verify_mixed_pair");

    MixedPairReport rep;
    rep.kind = kind;
    rep.tol_defect = tol_defect;
    rep.order_violation = pointwise_leq(sigma, rho, tol_defect);
    rep.ordered = !rep.order_violation.has_value();

    // Kind A couples aleph2 to the opposite curve; kind B couples aleph1.
    SplitLoad load_sigma = (kind == MixedKind::A) ? split_load(p, sigma, rho)
                                                  : split_load(p, rho, sigma);
    SplitLoad load_rho = (kind == MixedKind::A) ? split_load(p, rho, sigma)
                                                : split_load(p, sigma, rho);

    rep.sigma_side = make_side(defect_curve(p, sigma, load_sigma.load), true, tol_defect);
    rep.rho_side = make_side(defect_curve(p, rho, load_rho.load), false, tol_defect);
    rep.sigma_endpoint_ok = sigma[0] <= p.v0 + tol_defect;
    rep.rho_endpoint_ok = rho[0] >= p.v0 - tol_defect;
    rep.sigma_side.endpoint_ok = rep.sigma_endpoint_ok;
    rep.rho_side.endpoint_ok = rep.rho_endpoint_ok;

    rep.exact_mixed_solution = interior_abs_max(rep.sigma_side.defect) <= tol_defect &&
                               interior_abs_max(rep.rho_side.defect) <= tol_defect &&
                               std::fabs(sigma[0] - p.v0) <= tol_defect &&
                               std::fabs(rho[0] - p.v0) <= tol_defect;
    return rep;
}

BracketState make_bracket_state(const ProblemSpec& p, const GridFunction& sigma0,
                                const GridFunction& rho0, const SolverConfig& cfg) {
    p.validate();
    require_same_grid(sigma0, rho0, "make_bracket_state");
    double tol = tol_order(cfg, sigma0.grid());
    BracketState st{sigma0, rho0, 0, sup_diff(rho0, sigma0),
                    !pointwise_leq(sigma0, rho0, tol).has_value()};
    return st;
}

namespace {

struct HalfStep {
    GridFunction value;
    int escapes;
};

// Solves w = [v0 - psi(s0, v0, .)] + I^alpha[aleph1(a1_src) + aleph2(a2_src)]
//           + psi(s, w, w o w).
// The initial-node composed slot is frozen from the previous same-side
// iterate; it is exact whenever psi does not read w.
HalfStep bracket_half_step(const ProblemSpec& p, const SolverConfig& cfg,
                           const GridFunction& a1_src, const GridFunction& a2_src,
                           const GridFunction& prev_same_side) {
    SplitLoad sl = split_load(p, a1_src, a2_src);
    GridFunction forcing = rl_integral(sl.load, p.alpha);
    double c = p.v0 - p.psi_at(p.s0, p.v0, prev_same_side.eval_clamped(p.v0));
    std::vector<double> g(forcing.values());
    for (double& x : g) x += c;
    GridFunction rhs = forcing.with_values(std::move(g));
    return HalfStep{solve_implicit_pointwise(p, rhs, cfg), sl.escapes};
}

struct StepResult {
    BracketState state;
    int escapes;
};

StepResult step_impl(const ProblemSpec& p, const BracketState& st,
                     const SolverConfig& cfg, MixedKind kind) {
    if (kind == MixedKind::A && !st.ordered) {
        throw MonotonicityError("step requires an ordered pair (sigma <= rho)",
                                st.t, 0, st.width);
    }
    HalfStep sn = (kind == MixedKind::A)
                      ? bracket_half_step(p, cfg, st.sigma, st.rho, st.sigma)
                      : bracket_half_step(p, cfg, st.rho, st.sigma, st.sigma);
    HalfStep rn = (kind == MixedKind::A)
                      ? bracket_half_step(p, cfg, st.rho, st.sigma, st.rho)
                      : bracket_half_step(p, cfg, st.sigma, st.rho, st.rho);

    double tol = tol_order(cfg, st.sigma.grid());
    int t_next = st.t + 1;

    if (kind == MixedKind::A) {
        // The accepted chain is sigma_t <= sigma_{t+1} <= rho_{t+1} <= rho_t.
        // A violation beyond tolerance means the standing hypotheses do not
        // hold for this problem (or the resolution is too coarse).
        struct Check {
            const GridFunction* lo;
            const GridFunction* hi;
            const char* what;
        } checks[] = {
            {&st.sigma, &sn.value, "sigma_t <= sigma_{t+1}"},
            {&sn.value, &rn.value, "sigma_{t+1} <= rho_{t+1}"},
            {&rn.value, &st.rho, "rho_{t+1} <= rho_t"},
        };
        for (const auto& c : checks) {
            if (auto viol = pointwise_leq(*c.lo, *c.hi, tol)) {
                std::ostringstream os;
                os << "ordering violation at step " << t_next << ": " << c.what
                   << " broken at node " << viol->node << " by " << viol->magnitude;
                throw MonotonicityError(os.str(), t_next, viol->node, viol->magnitude);
            }
        }
    }

    BracketState next{sn.value, rn.value, t_next, sup_diff(rn.value, sn.value),
                      !pointwise_leq(sn.value, rn.value, tol).has_value()};
    return StepResult{std::move(next), sn.escapes + rn.escapes};
}

double limit_defect(const ProblemSpec& p, const GridFunction& x,
                    const GridFunction& a1_src, const GridFunction& a2_src) {
    SplitLoad sl = split_load(p, a1_src, a2_src);
    GridFunction forcing = rl_integral(sl.load, p.alpha);
    SelfComposeResult comp = self_compose(x, p.policy);
    const Grid& g = x.grid();
    double c = p.v0 - p.psi_at(p.s0, p.v0, x.eval_clamped(p.v0));
    double worst = 0.0;
    for (int i = 0; i <= g.n; ++i) {
        double rhs = c + p.psi_at(g.node(i), x[i], comp.value[i]) + forcing[i];
        worst = std::max(worst, std::fabs(x[i] - rhs));
    }
    return worst;
}

}  // namespace

BracketState step_type_a(const ProblemSpec& p, const BracketState& state,
                         const SolverConfig& cfg) {
    return step_impl(p, state, cfg, MixedKind::A).state;
}

BracketState step_type_b(const ProblemSpec& p, const BracketState& state,
                         const SolverConfig& cfg) {
    return step_impl(p, state, cfg, MixedKind::B).state;
}

BracketReport iterate_extremal(const ProblemSpec& p, const GridFunction& sigma0,
                               const GridFunction& rho0, MixedKind kind,
                               const SolverConfig& cfg, const StopRule& stop,
                               bool skip_pair_check) {
    p.validate();
    cfg.validate();
    require_same_grid(sigma0, rho0, "iterate_extremal");

    BracketReport report;
    report.kind = kind;
    report.sigma = sigma0;
    report.rho = rho0;

    BracketState st = make_bracket_state(p, sigma0, rho0, cfg);
    report.sigma_iterates.push_back(st.sigma);
    report.rho_iterates.push_back(st.rho);
    report.width_history.push_back(st.width);

    // An already-collapsed bracket has nothing to iterate; the pair
    // verification only guards the iteration itself, so here it merely
    // records whether the input is an exact mixed solution.
    if (st.width <= stop.width_tol) {
        report.converged = true;
        report.steps = 0;
        report.exact_mixed_solution_input =
            verify_mixed_pair(p, sigma0, rho0, kind).exact_mixed_solution;
        if (report.exact_mixed_solution_input) {
            report.notes += "input pair is an exact mixed solution; no iteration; ";
        }
        return report;
    }

    MixedPairReport pre = verify_mixed_pair(p, sigma0, rho0, kind);
    report.exact_mixed_solution_input = pre.exact_mixed_solution;
    if (!pre.pass()) {
        if (!skip_pair_check) {
            int node = pre.order_violation ? pre.order_violation->node
                       : !pre.sigma_side.pass ? pre.sigma_side.worst_node
                       : !pre.rho_side.pass   ? pre.rho_side.worst_node
                                              : 0;
            double mag = pre.order_violation ? pre.order_violation->magnitude
                         : !pre.sigma_side.pass ? pre.sigma_side.worst
                                                : -pre.rho_side.worst;
            std::ostringstream os;
            os << "initial pair fails mixed-pair verification (kind "
               << (kind == MixedKind::A ? 'A' : 'B') << ") at node " << node;
            throw MonotonicityError(os.str(), 0, node, mag);
        }
        report.notes += "pair verification skipped by request and would fail; ";
    }

    if (pre.exact_mixed_solution) {
        report.converged = true;
        report.notes += "input pair is an exact mixed solution; no iteration; ";
    } else {
        for (int t = 0; t < stop.max_steps; ++t) {
            StepResult sr = step_impl(p, st, cfg, kind);
            st = std::move(sr.state);
            report.composition_escapes += sr.escapes;
            report.sigma_iterates.push_back(st.sigma);
            report.rho_iterates.push_back(st.rho);
            report.width_history.push_back(st.width);
            report.steps = st.t;
            if (st.width <= stop.width_tol) {
                report.converged = true;
                break;
            }
        }
    }

    double tol = tol_order(cfg, sigma0.grid());
    const auto& sig = report.sigma_iterates;
    const auto& rho = report.rho_iterates;
    const int last = static_cast<int>(sig.size()) - 1;

    auto record_violation = [&](int step, const GridFunction& lo, const GridFunction& hi) {
        if (auto v = pointwise_leq(lo, hi, tol)) {
            report.violations.push_back(OrderingViolation{step, v->node, v->magnitude});
        }
    };

    if (kind == MixedKind::A) {
        report.sigma = sig.back();
        report.rho = rho.back();
        if (last >= 1) {
            report.limit_defect_sigma = limit_defect(p, report.sigma, report.sigma, report.rho);
            report.limit_defect_rho = limit_defect(p, report.rho, report.rho, report.sigma);
        }
    } else {
        // Interleaving: even sigma iterates ascend, odd ones descend, all
        // evens below all odds; mirrored for rho. Violations are diagnostics.
        for (int t = 2; t <= last; ++t) {
            if (t % 2 == 0) {
                record_violation(t, sig[static_cast<std::size_t>(t - 2)],
                                 sig[static_cast<std::size_t>(t)]);
                record_violation(t, rho[static_cast<std::size_t>(t)],
                                 rho[static_cast<std::size_t>(t - 2)]);
            } else {
                record_violation(t, sig[static_cast<std::size_t>(t)],
                                 sig[static_cast<std::size_t>(t - 2)]);
                record_violation(t, rho[static_cast<std::size_t>(t - 2)],
                                 rho[static_cast<std::size_t>(t)]);
            }
        }
        int last_even = last - (last % 2);
        int last_odd = last % 2 == 1 ? last : last - 1;
        if (last_odd >= 1) {
            record_violation(last, sig[static_cast<std::size_t>(last_even)],
                             sig[static_cast<std::size_t>(last_odd)]);
            record_violation(last, rho[static_cast<std::size_t>(last_odd)],
                             rho[static_cast<std::size_t>(last_even)]);
        }

        report.sigma = sig[static_cast<std::size_t>(last_even)];
        report.rho = rho[static_cast<std::size_t>(last_even)];
        if (last_odd >= 1) {
            report.sigma_diamond = sig[static_cast<std::size_t>(last_odd)];
            report.rho_diamond = rho[static_cast<std::size_t>(last_odd)];
            report.limit_defect_sigma =
                limit_defect(p, report.sigma, *report.rho_diamond, *report.sigma_diamond);
            report.limit_defect_rho =
                limit_defect(p, report.rho, *report.sigma_diamond, *report.rho_diamond);
        }
        report.notes +=
            "kind B iterates come from one cross-coupled step map applied "
            "repeatedly; the even/odd interleaving is checked as a consequence; ";
    }

    return report;
}

UniquenessReport check_uniqueness(const ProblemSpec& p, const GridFunction& sigma,
                                  const GridFunction& rho, double collapse_tol) {
    p.validate();
    require_same_grid(sigma, rho, "check_uniqueness");
    if (!p.n1 || !p.n2) {
        throw ConfigError("check_uniqueness requires N1 and N2 in the problem spec");
    }

    UniquenessReport rep;
    rep.collapse_tol = collapse_tol;
    rep.width = sup_diff(rho, sigma);

    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < sigma.size(); ++i) {
        lo = std::min({lo, sigma[i], rho[i]});
        hi = std::max({hi, sigma[i], rho[i]});
    }

    const Grid& g = sigma.grid();
    const int s_count = std::min(g.n + 1, 33);
    const int v_count = 17;
    const double tol_check = 1e-9;
    rep.worst_excess_n1 = -std::numeric_limits<double>::infinity();
    rep.worst_excess_n2 = -std::numeric_limits<double>::infinity();

    for (int si = 0; si < s_count; ++si) {
        double s = g.s0 + g.length * si / (s_count - 1);
        for (int j2 = 0; j2 < v_count; ++j2) {
            for (int j1 = j2; j1 < v_count; ++j1) {
                // v1 >= v2 over the bracket range, composed slot tied via sigma.
                double v1 = (v_count == 1) ? lo : lo + (hi - lo) * j1 / (v_count - 1);
                double v2 = (v_count == 1) ? lo : lo + (hi - lo) * j2 / (v_count - 1);
                double w1 = sigma.eval_clamped(v1);
                double w2 = sigma.eval_clamped(v2);
                double base = (v1 - p.psi_at(s, v1, w1)) - (v2 - p.psi_at(s, v2, w2));
                double e1 = (p.aleph1.eval(s, v1, w1) - p.aleph1.eval(s, v2, w2)) -
                            *p.n1 * base;
                double e2 = (p.aleph2.eval(s, v1, w1) - p.aleph2.eval(s, v2, w2)) -
                            *p.n2 * base;
                if (e1 > rep.worst_excess_n1) {
                    rep.worst_excess_n1 = e1;
                    rep.witness_n1 = Witness{s, v1, v2};
                }
                if (e2 > rep.worst_excess_n2) {
                    rep.worst_excess_n2 = e2;
                    rep.witness_n2 = Witness{s, v1, v2};
                }
            }
        }
    }

    rep.n_conditions_hold =
        rep.worst_excess_n1 <= tol_check && rep.worst_excess_n2 <= tol_check;
    rep.collapsed = rep.width <= collapse_tol;
    return rep;
}

}  // namespace fihde
