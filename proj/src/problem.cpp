#include "fihde/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fihde/fraccalc.hpp"
#include "fihde/monotone.hpp"

namespace fihde {

void ProblemSpec::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw ConfigError("alpha must lie in (0, 1)");
    }
    if (!(length > 0.0) || !std::isfinite(s0) || !std::isfinite(length)) {
        throw ConfigError("interval length must be positive and finite");
    }
    if (!std::isfinite(v0)) throw ConfigError("v0 must be finite");
    if (!(ell > 0.0)) throw ConfigError("ell must be positive");
    if (!(big_m > 0.0)) throw ConfigError("M must be positive");
    if (ell > big_m) throw ConfigError("ell must not exceed M");
    if (!(kappa > 0.0)) throw ConfigError("kappa must be positive");
    if (n1 && !(*n1 > 0.0)) throw ConfigError("N1 must be positive when given");
    if (n2 && !(*n2 > 0.0)) throw ConfigError("N2 must be positive when given");
    if (psi.empty() || aleph1.empty() || aleph2.empty()) {
        throw ConfigError("psi, aleph1 and aleph2 must all be set");
    }
}

void SamplingBox::validate() const {
    if (!(v_lo < v_hi)) throw ConfigError("sampling box needs v_lo < v_hi");
    if (s_samples < 2 || v_samples < 2 || w_samples < 2) {
        throw ConfigError("sampling box needs at least 2 samples per axis");
    }
    if (!(tol_check >= 0.0)) throw ConfigError("tol_check must be non-negative");
}

bool HypothesisReport::all_hold() const {
    for (const auto& c : checks) {
        if (!c.holds) return false;
    }
    return true;
}

const HypothesisCheck* HypothesisReport::find(const std::string& name) const {
    for (const auto& c : checks) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

namespace {

std::vector<double> linspace(double lo, double hi, int count) {
    std::vector<double> out(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (count - 1);
    }
    return out;
}

// Sample lattice shared by the checkers. In tied mode the composed slot
// follows v through the candidate curve; otherwise it is its own axis.
struct Lattice {
    std::vector<double> s;
    std::vector<double> v;
    std::vector<double> w;       // untied mode only
    std::vector<double> w_of_v;  // tied mode only
    bool tied = false;
};

Lattice build_lattice(const ProblemSpec& p, const SamplingBox& box,
                      const GridFunction* candidate) {
    box.validate();
    Lattice lat;
    lat.s = linspace(p.s0, p.s0 + p.length, box.s_samples);
    lat.v = linspace(box.v_lo, box.v_hi, box.v_samples);
    lat.tied = candidate != nullptr;
    if (lat.tied) {
        lat.w_of_v.reserve(lat.v.size());
        for (double v : lat.v) {
            lat.w_of_v.push_back(candidate->eval_clamped(v));
        }
    } else {
        lat.w = linspace(box.v_lo, box.v_hi, box.w_samples);
    }
    return lat;
}

}  // namespace

HypothesisCheck check_a1(const ProblemSpec& p, const SamplingBox& box,
                         const GridFunction* candidate) {
    Lattice lat = build_lattice(p, box, candidate);
    double min_gap = std::numeric_limits<double>::infinity();
    Witness witness;

    auto scan_pairs = [&](double s, const std::vector<double>& phi) {
        for (std::size_t j1 = 0; j1 + 1 < lat.v.size(); ++j1) {
            for (std::size_t j2 = j1 + 1; j2 < lat.v.size(); ++j2) {
                double gap = phi[j2] - phi[j1];
                if (gap < min_gap) {
                    min_gap = gap;
                    witness = Witness{s, lat.v[j1], lat.v[j2]};
                }
            }
        }
    };

    std::vector<double> phi(lat.v.size());
    for (double s : lat.s) {
        if (lat.tied) {
            for (std::size_t j = 0; j < lat.v.size(); ++j) {
                phi[j] = lat.v[j] - p.psi_at(s, lat.v[j], lat.w_of_v[j]);
            }
            scan_pairs(s, phi);
        } else {
            for (double w : lat.w) {
                for (std::size_t j = 0; j < lat.v.size(); ++j) {
                    phi[j] = lat.v[j] - p.psi_at(s, lat.v[j], w);
                }
                scan_pairs(s, phi);
            }
        }
    }

    HypothesisCheck out;
    out.name = "a1";
    out.worst_violation = -min_gap;
    out.holds = out.worst_violation <= 0.0;
    out.witness = witness;
    return out;
}

HypothesisCheck check_a2(const ProblemSpec& p, const SamplingBox& box,
                         const GridFunction* candidate) {
    Lattice lat = build_lattice(p, box, candidate);
    auto bound = [&](double d) { return p.ell * d / (p.big_m + d); };

    double worst = -std::numeric_limits<double>::infinity();
    Witness witness;

    auto consider = [&](double s, double v1, double w1, double v2, double w2) {
        double lhs = std::fabs(p.psi_at(s, v1, w1) - p.psi_at(s, v2, w2));
        double excess = lhs - bound(std::fabs(v1 - v2)) - box.tol_check;
        if (excess > worst) {
            worst = excess;
            witness = Witness{s, v1, v2};
        }
    };

    if (lat.tied) {
        for (double s : lat.s) {
            for (std::size_t j1 = 0; j1 + 1 < lat.v.size(); ++j1) {
                for (std::size_t j2 = j1 + 1; j2 < lat.v.size(); ++j2) {
                    consider(s, lat.v[j1], lat.w_of_v[j1], lat.v[j2], lat.w_of_v[j2]);
                }
            }
        }
        HypothesisCheck out;
        out.name = "a2";
        out.worst_violation = worst;
        out.holds = worst <= 0.0;
        out.witness = witness;
        return out;
    }

    // Untied: the bound is treated as uniform in the composed slot, so pairs
    // sweep (v, w) jointly, including equal v with different w.
    const std::size_t nv = lat.v.size();
    const std::size_t nw = lat.w.size();
    for (double s : lat.s) {
        for (std::size_t j1 = 0; j1 < nv; ++j1) {
            for (std::size_t k1 = 0; k1 < nw; ++k1) {
                for (std::size_t j2 = j1; j2 < nv; ++j2) {
                    for (std::size_t k2 = (j2 == j1 ? k1 + 1 : 0); k2 < nw; ++k2) {
                        consider(s, lat.v[j1], lat.w[k1], lat.v[j2], lat.w[k2]);
                    }
                }
            }
        }
    }

    // Diagonal variant (w tied to v directly) to flag third-slot sensitivity.
    double worst_diag = -std::numeric_limits<double>::infinity();
    for (double s : lat.s) {
        for (std::size_t j1 = 0; j1 + 1 < nv; ++j1) {
            for (std::size_t j2 = j1 + 1; j2 < nv; ++j2) {
                double lhs = std::fabs(p.psi_at(s, lat.v[j1], lat.v[j1]) -
                                       p.psi_at(s, lat.v[j2], lat.v[j2]));
                double excess =
                    lhs - bound(std::fabs(lat.v[j1] - lat.v[j2])) - box.tol_check;
                worst_diag = std::max(worst_diag, excess);
            }
        }
    }

    HypothesisCheck out;
    out.name = "a2";
    out.worst_violation = worst;
    out.holds = worst <= 0.0;
    out.witness = witness;
    out.third_slot_sensitive = (worst <= 0.0) != (worst_diag <= 0.0);
    if (out.third_slot_sensitive) {
        out.note = "verdict differs between swept and tied composed slot";
    }
    return out;
}

HypothesisCheck check_b1(const ProblemSpec& p, const SamplingBox& box,
                         const GridFunction* candidate) {
    Lattice lat = build_lattice(p, box, candidate);
    double max_abs = 0.0;
    Witness witness;

    auto consider = [&](double s, double v, double w) {
        double a = std::fabs(p.aleph_at(s, v, w));
        if (a > max_abs) {
            max_abs = a;
            witness = Witness{s, v, w};
        }
    };

    for (double s : lat.s) {
        for (std::size_t j = 0; j < lat.v.size(); ++j) {
            if (lat.tied) {
                consider(s, lat.v[j], lat.w_of_v[j]);
            } else {
                for (double w : lat.w) consider(s, lat.v[j], w);
            }
        }
    }

    HypothesisCheck out;
    out.name = "b1";
    out.worst_violation = max_abs - p.kappa;
    out.holds = out.worst_violation <= 0.0;
    out.witness = witness;
    std::ostringstream os;
    os << "max |aleph| = " << max_abs << " vs kappa = " << p.kappa;
    out.note = os.str();
    return out;
}

std::vector<HypothesisCheck> check_b2(const ProblemSpec& p, const SamplingBox& box,
                                      const GridFunction* candidate) {
    Lattice lat = build_lattice(p, box, candidate);

    // aleph1 must not decrease, aleph2 must not increase across v1 < v2.
    double worst1 = -std::numeric_limits<double>::infinity();
    double worst2 = -std::numeric_limits<double>::infinity();
    Witness wit1, wit2;

    auto scan = [&](double s, auto&& w_for) {
        for (std::size_t j1 = 0; j1 + 1 < lat.v.size(); ++j1) {
            for (std::size_t j2 = j1 + 1; j2 < lat.v.size(); ++j2) {
                double v1 = lat.v[j1];
                double v2 = lat.v[j2];
                double drop1 = p.aleph1.eval(s, v1, w_for(j1)) -
                               p.aleph1.eval(s, v2, w_for(j2));
                double rise2 = p.aleph2.eval(s, v2, w_for(j2)) -
                               p.aleph2.eval(s, v1, w_for(j1));
                if (drop1 > worst1) {
                    worst1 = drop1;
                    wit1 = Witness{s, v1, v2};
                }
                if (rise2 > worst2) {
                    worst2 = rise2;
                    wit2 = Witness{s, v1, v2};
                }
            }
        }
    };

    for (double s : lat.s) {
        if (lat.tied) {
            scan(s, [&](std::size_t j) { return lat.w_of_v[j]; });
        } else {
            for (double w : lat.w) {
                scan(s, [&](std::size_t) { return w; });
            }
        }
    }

    HypothesisCheck c1;
    c1.name = "b2_aleph1";
    c1.worst_violation = worst1 - box.tol_check;
    c1.holds = c1.worst_violation <= 0.0;
    c1.witness = wit1;
    c1.note = "aleph1 non-decreasing in v";

    HypothesisCheck c2;
    c2.name = "b2_aleph2";
    c2.worst_violation = worst2 - box.tol_check;
    c2.holds = c2.worst_violation <= 0.0;
    c2.witness = wit2;
    c2.note = "aleph2 non-increasing in v";
    return {c1, c2};
}

HypothesisCheck check_b3_b4(const ProblemSpec& p, const GridFunction& sigma0,
                            const GridFunction& rho0, MixedKind kind) {
    require_same_grid(sigma0, rho0, "check_b3_b4");
    MixedPairReport rep = verify_mixed_pair(p, sigma0, rho0, kind);
    const double tol = rep.tol_defect;

    double worst = -std::numeric_limits<double>::infinity();
    Witness witness;
    const Grid& g = sigma0.grid();
    auto consider = [&](double excess, int node) {
        if (excess > worst) {
            worst = excess;
            int i = std::clamp(node, 0, g.n);
            witness = Witness{g.node(i), sigma0[i], rho0[i]};
        }
    };

    consider(rep.sigma_side.worst - tol, rep.sigma_side.worst_node);
    consider(-rep.rho_side.worst - tol, rep.rho_side.worst_node);
    consider(sigma0[0] - p.v0 - tol, 0);
    consider(p.v0 - rho0[0] - tol, 0);
    if (rep.order_violation) {
        consider(rep.order_violation->magnitude - tol, rep.order_violation->node);
    }

    HypothesisCheck out;
    out.name = kind == MixedKind::A ? "b3" : "b4";
    out.worst_violation = worst;
    out.holds = rep.pass();
    out.witness = witness;
    if (rep.exact_mixed_solution) {
        out.note = "pair is an exact mixed solution (all defects vanish)";
    }
    return out;
}

HypothesisReport run_hypothesis_checks(const ProblemSpec& p, const SamplingBox& box,
                                       const GridFunction* candidate,
                                       const GridFunction* sigma0,
                                       const GridFunction* rho0, MixedKind kind) {
    p.validate();
    HypothesisReport report;
    report.box = box;
    report.checks.push_back(check_a1(p, box, candidate));
    report.checks.push_back(check_a2(p, box, candidate));
    report.checks.push_back(check_b1(p, box, candidate));
    for (auto& c : check_b2(p, box, candidate)) {
        report.checks.push_back(std::move(c));
    }
    if (sigma0 && rho0) {
        report.checks.push_back(check_b3_b4(p, *sigma0, *rho0, kind));
    }
    return report;
}

double psi_origin_bound(const ProblemSpec& p, int samples) {
    double m = 0.0;
    for (int i = 0; i < samples; ++i) {
        double s = p.s0 + p.length * i / (samples - 1);
        m = std::max(m, std::fabs(p.psi_at(s, 0.0, 0.0)));
    }
    return m;
}

double apriori_radius(const ProblemSpec& p) {
    double head = std::fabs(p.v0 - p.psi_at(p.s0, p.v0, p.v0));
    double tail = p.kappa * std::pow(p.length, p.alpha) / gamma_fn(p.alpha + 1.0);
    return head + p.ell + psi_origin_bound(p) + tail;
}

}  // namespace fihde
