#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fihde/expr.hpp"
#include "fihde/grid.hpp"

namespace fihde {

// Which coupling of the split right side a mixed pair is verified against.
enum class MixedKind { A, B };

// One problem instance:
//
//   D^alpha[ v - psi(s, v, v(v)) ] = aleph1(s, v, v(v)) + aleph2(s, v, v(v)),
//   v(s0) = v0  on [s0, s0 + length],
//
// together with the constants the hypothesis checkers test against: the
// saturating Lipschitz pair (ell, big_m) for psi, the bound kappa on the
// split right side, and the optional one-sided constants n1, n2 used by the
// uniqueness check.
struct ProblemSpec {
    double alpha = 0.5;
    double s0 = 0.0;
    double length = 1.0;
    double v0 = 0.0;
    Expr psi;
    Expr aleph1;
    Expr aleph2;
    double ell = 1.0;
    double big_m = 1.0;
    double kappa = 1.0;
    std::optional<double> n1;
    std::optional<double> n2;
    DomainPolicy policy = DomainPolicy::Clamp;

    void validate() const;
    Grid make_grid(int n) const { return Grid(s0, length, n); }

    double psi_at(double s, double v, double w) const { return psi.eval(s, v, w); }
    // The split right side is always consumed as the sum.
    double aleph_at(double s, double v, double w) const {
        return aleph1.eval(s, v, w) + aleph2.eval(s, v, w);
    }
};

// Deterministic sampling lattice for the hypothesis checkers: s sweeps the
// interval, v (and, when untied, w) sweep [v_lo, v_hi].
struct SamplingBox {
    double v_lo = -1.0;
    double v_hi = 1.0;
    int s_samples = 9;
    int v_samples = 17;
    int w_samples = 9;
    double tol_check = 1e-9;

    void validate() const;
};

struct Witness {
    double s = 0.0;
    double v = 0.0;
    double z = 0.0;  // the paired state value or the swept w, per check
};

// Outcome of one hypothesis check on the sampled box. A pass is always
// "holds on the sampled box", never a proof: worst_violation <= 0 iff holds,
// and the witness attains it.
struct HypothesisCheck {
    std::string name;
    bool holds = false;
    double worst_violation = 0.0;
    Witness witness;
    bool third_slot_sensitive = false;  // tied vs swept w changed the verdict
    std::string note;
};

struct HypothesisReport {
    SamplingBox box;
    std::vector<HypothesisCheck> checks;

    bool all_hold() const;
    const HypothesisCheck* find(const std::string& name) const;
};

// When a candidate curve is supplied, the composed slot w is tied to v
// through it (w = candidate(clamp(v))); otherwise w sweeps the box
// independently, which is the conservative reading.

// v -> v - psi(s, v, w) is increasing: minimal sampled gap reported as
// -worst_violation.
HypothesisCheck check_a1(const ProblemSpec& p, const SamplingBox& box,
                         const GridFunction* candidate = nullptr);

// |psi(s,v,w_v) - psi(s,z,w_z)| <= ell |v-z| / (big_m + |v-z|), sampled over
// pairs. When w is swept, the entry is flagged third_slot_sensitive if tying
// w to v would change the verdict.
HypothesisCheck check_a2(const ProblemSpec& p, const SamplingBox& box,
                         const GridFunction* candidate = nullptr);

// |aleph1 + aleph2| <= kappa on the box.
HypothesisCheck check_b1(const ProblemSpec& p, const SamplingBox& box,
                         const GridFunction* candidate = nullptr);

// aleph1 non-decreasing and aleph2 non-increasing in v; one entry for each.
std::vector<HypothesisCheck> check_b2(const ProblemSpec& p, const SamplingBox& box,
                                      const GridFunction* candidate = nullptr);

// sigma0 <= rho0 pointwise plus the mixed-pair defect verification for the
// chosen kind (delegated to the bracketing machinery).
HypothesisCheck check_b3_b4(const ProblemSpec& p, const GridFunction& sigma0,
                            const GridFunction& rho0, MixedKind kind);

// a1, a2, b1 and both b2 entries in order; b3/b4 appended when a bracket
// pair is supplied.
HypothesisReport run_hypothesis_checks(const ProblemSpec& p, const SamplingBox& box,
                                       const GridFunction* candidate = nullptr,
                                       const GridFunction* sigma0 = nullptr,
                                       const GridFunction* rho0 = nullptr,
                                       MixedKind kind = MixedKind::A);

// Sampled sup of |psi(s, 0, 0)| over the interval.
double psi_origin_bound(const ProblemSpec& p, int samples = 257);

// A-priori sup-norm radius diagnostic:
//   |v0 - psi(s0, v0, v0)| + ell + psi_origin_bound + kappa a^alpha / Gamma(alpha+1).
double apriori_radius(const ProblemSpec& p);

}  // namespace fihde
