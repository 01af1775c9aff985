#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fihde/oracle.hpp"
#include "fihde/report_io.hpp"
#include "fihde/scenario.hpp"

namespace fihde {

// Stable exit codes, shared by every subcommand.
namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int input_error = 1;
inline constexpr int no_convergence = 2;
inline constexpr int monotonicity = 3;
inline constexpr int verification_failed = 4;
}  // namespace exit_code

struct CmdOptions {
    std::optional<std::string> out_dir;  // --out; beats FIHDE_OUT, beats scenario
    std::optional<int> n;
    std::optional<double> tol;
    std::optional<MixedKind> kind;
    bool quiet = false;
    std::optional<std::string> candidate_file;  // verify
    std::string role = "pair";                  // verify: lower | upper | pair
    std::vector<int> grids;                     // convergence; default 128..1024
};

// Effective scenario after CLI/environment overrides.
Scenario apply_overrides(Scenario sc, const CmdOptions& opt);

int cmd_solve(const Scenario& sc, const CmdOptions& opt);
int cmd_bracket(const Scenario& sc, const CmdOptions& opt);
int cmd_verify(const Scenario& sc, const CmdOptions& opt);
int cmd_hypotheses(const Scenario& sc, const CmdOptions& opt);
int cmd_convergence(const Scenario& sc, const CmdOptions& opt);

// Loads the scenario, applies overrides, dispatches, and maps exceptions to
// exit codes (diagnostics to stderr unless quiet).
int run_command(const std::string& command, const std::string& scenario_path,
                const CmdOptions& opt);

// Golden curves: the dense reference run subsampled by stride onto the
// production nodes. Golden bracket histories: the bracketing run at the
// scenario resolution. `date` is stamped into the provenance header;
// regeneration reuses the stored header, so bytes reproduce exactly.
std::string make_solve_golden_bytes(const Scenario& sc, const OracleConfig& cfg,
                                    const std::string& date);
std::string make_bracket_golden_bytes(const Scenario& sc, const std::string& date);

// Re-runs whatever the golden file records (checking the scenario hash) and
// returns the regenerated bytes for comparison.
std::string regenerate_golden_bytes(const Scenario& sc, const GoldenFile& golden);

}  // namespace fihde
