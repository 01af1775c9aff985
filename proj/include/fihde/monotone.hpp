#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fihde/solver.hpp"

namespace fihde {

// Role names follow the defect sign conventions of the problem statement:
// a Lower candidate must satisfy
//   D^alpha[c - psi(s, c, c o c)] >= aleph(s, c, c o c)  and  c(s0) >= v0,
// an Upper candidate the reversed inequalities. (Note these pair >= with >=:
// under this convention constants above the solution tend to verify as
// Lower. The mixed-pair machinery below is the one that matches the
// bracket ordering sigma <= rho.)
enum class Role { Lower, Upper };

double default_tol_defect();

// Ordering slack used by the bracketing iteration: discrete iterates violate
// exact pointwise order at round-off/quadrature scale, so strict zero
// tolerance would false-alarm.
double tol_order(const SolverConfig& cfg, const Grid& grid);

// Signed defect of one inequality over the grid. For a "<=" side, worst is
// the maximum defect and pass means worst <= tol; for a ">=" side, worst is
// the minimum and pass means worst >= -tol. Judged at interior nodes
// (the endpoint stencils of the discrete derivative are excluded).
struct SideDefect {
    std::vector<double> defect;
    double worst = 0.0;
    int worst_node = -1;
    bool endpoint_ok = true;
    bool pass = true;
};

struct LowerUpperReport {
    Role role;
    double tol_defect = 0.0;
    double endpoint_value = 0.0;  // candidate(s0)
    double v0 = 0.0;
    SideDefect side;

    bool pass() const { return side.pass && side.endpoint_ok; }
};

struct MixedPairReport {
    MixedKind kind = MixedKind::A;
    double tol_defect = 0.0;
    bool ordered = false;  // sigma <= rho pointwise within tol
    std::optional<PointwiseViolation> order_violation;
    SideDefect sigma_side;  // "<=" inequality
    SideDefect rho_side;    // ">=" inequality
    bool sigma_endpoint_ok = false;  // sigma(s0) <= v0
    bool rho_endpoint_ok = false;    // rho(s0) >= v0
    bool exact_mixed_solution = false;  // all defects vanish within tol

    bool pass() const {
        return ordered && sigma_side.pass && rho_side.pass && sigma_endpoint_ok &&
               rho_endpoint_ok;
    }
};

// d(s) = D^alpha[c - psi(s, c, c o c)](s) - aleph(s, c, c o c), with the
// role-specific sign and endpoint tests described on Role.
LowerUpperReport verify_lower_upper(const ProblemSpec& p, const GridFunction& candidate,
                                    Role role,
                                    double tol_defect = default_tol_defect());

// The four coupled inequalities of the chosen kind. Kind A tests the sigma
// defect against aleph1(sigma) + aleph2(rho) and the rho defect against
// aleph1(rho) + aleph2(sigma); kind B cross-couples the aleph1 slot the
// other way. Endpoints: sigma(s0) <= v0 <= rho(s0).
MixedPairReport verify_mixed_pair(const ProblemSpec& p, const GridFunction& sigma,
                                  const GridFunction& rho, MixedKind kind,
                                  double tol_defect = default_tol_defect());

struct BracketState {
    GridFunction sigma;
    GridFunction rho;
    int t = 0;
    double width = 0.0;   // sup |rho - sigma|
    bool ordered = true;  // sigma <= rho pointwise within tol_order
};

BracketState make_bracket_state(const ProblemSpec& p, const GridFunction& sigma0,
                                const GridFunction& rho0, const SolverConfig& cfg);

// One sweep of the same-coupled scheme: the new sigma solves
//   w = [v0 - psi(s0, v0, .)] + I^alpha[ aleph1(sigma_t) + aleph2(rho_t) ]
//       + psi(s, w, w o w)
// (an implicit solve), and the new rho the same with the roles of sigma_t
// and rho_t swapped. Ordering sigma_t <= sigma_{t+1} <= rho_{t+1} <= rho_t
// is enforced within tol_order; violations raise MonotonicityError.
BracketState step_type_a(const ProblemSpec& p, const BracketState& state,
                         const SolverConfig& cfg);

// The cross-coupled sweep: the sigma update draws aleph1 from rho_t and
// aleph2 from sigma_t, the rho update the reverse. Successive iterates
// interleave around the solution (even ones ascend, odd ones descend);
// interleaving violations are diagnostics, not errors.
BracketState step_type_b(const ProblemSpec& p, const BracketState& state,
                         const SolverConfig& cfg);

struct StopRule {
    double width_tol = 1e-6;
    int max_steps = 30;
};

struct OrderingViolation {
    int step;
    int node;
    double magnitude;
};

struct BracketReport {
    MixedKind kind = MixedKind::A;
    bool converged = false;
    int steps = 0;
    std::vector<double> width_history;  // entry t is the width of (sigma_t, rho_t)
    std::vector<OrderingViolation> violations;
    std::vector<GridFunction> sigma_iterates;  // [0] is sigma0
    std::vector<GridFunction> rho_iterates;
    GridFunction sigma;  // final (kind B: limit of the even subsequence)
    GridFunction rho;
    std::optional<GridFunction> sigma_diamond;  // kind B odd-subsequence limits
    std::optional<GridFunction> rho_diamond;
    double limit_defect_sigma = 0.0;  // integral-form residual of the limit system
    double limit_defect_rho = 0.0;
    bool exact_mixed_solution_input = false;
    int composition_escapes = 0;
    std::string notes;
};

// Drives step_type_a or step_type_b from (sigma0, rho0) until the width
// drops to width_tol or max_steps is reached. The initial pair must pass
// verify_mixed_pair for the chosen kind unless skip_pair_check is set (a
// warning is recorded in the notes in that case).
BracketReport iterate_extremal(const ProblemSpec& p, const GridFunction& sigma0,
                               const GridFunction& rho0, MixedKind kind,
                               const SolverConfig& cfg, const StopRule& stop,
                               bool skip_pair_check = false);

struct UniquenessReport {
    bool n_conditions_hold = false;
    double worst_excess_n1 = 0.0;
    double worst_excess_n2 = 0.0;
    Witness witness_n1;
    Witness witness_n2;
    double width = 0.0;
    double collapse_tol = 0.0;
    bool collapsed = false;

    bool pass() const { return n_conditions_hold && collapsed; }
};

// Samples the two one-sided conditions (differences of aleph_i bounded by
// n_i times differences of v - psi) over the bracket range; when both hold,
// asserts that the converged bracket has collapsed to collapse_tol. Requires
// n1 and n2 in the problem spec.
UniquenessReport check_uniqueness(const ProblemSpec& p, const GridFunction& sigma,
                                  const GridFunction& rho,
                                  double collapse_tol = 1e-6);

}  // namespace fihde
