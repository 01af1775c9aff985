#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fihde/commands.hpp"

using fihde::CmdOptions;
using fihde::MixedKind;

int main(int argc, char** argv) {
    CLI::App app{"fihde: solver and verification tools for fractional "
                 "self-composed hybrid differential equations"};
    app.require_subcommand(1);

    std::string scenario;
    std::string kind_str;
    std::string out_dir;
    int n = 0;
    double tol = 0.0;
    CmdOptions opt;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("scenario", scenario, "scenario file")->required();
        cmd->add_option("--out", out_dir, "output directory (beats FIHDE_OUT)");
        cmd->add_option("--n", n, "override the grid resolution");
        cmd->add_option("--tol", tol, "override the solver tolerance");
        cmd->add_option("--kind", kind_str, "override the bracket kind")
            ->check(CLI::IsMember({"A", "B"}));
        cmd->add_flag("--quiet", opt.quiet, "suppress progress output");
    };

    CLI::App* solve = app.add_subcommand("solve", "solve the integral equation");
    add_common(solve);
    CLI::App* bracket =
        app.add_subcommand("bracket", "run the monotone bracketing iteration");
    add_common(bracket);
    CLI::App* verify =
        app.add_subcommand("verify", "verify a candidate curve or the bracket pair");
    add_common(verify);
    std::string candidate;
    verify->add_option("--candidate", candidate, "candidate curve CSV");
    verify->add_option("--role", opt.role, "lower | upper | pair (default pair)")
        ->check(CLI::IsMember({"lower", "upper", "pair"}));
    CLI::App* hypotheses =
        app.add_subcommand("hypotheses", "run the hypothesis checkers");
    add_common(hypotheses);
    CLI::App* convergence =
        app.add_subcommand("convergence", "re-solve across grids and report order");
    add_common(convergence);
    convergence->add_option("--grids", opt.grids, "comma-separated grid sizes")
        ->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : fihde::exit_code::input_error;
    }

    if (app.count_all() == 0) return fihde::exit_code::input_error;

    if (!out_dir.empty()) opt.out_dir = out_dir;
    if (n != 0) opt.n = n;
    if (tol != 0.0) opt.tol = tol;
    if (!kind_str.empty()) {
        opt.kind = kind_str == "A" ? MixedKind::A : MixedKind::B;
    }
    if (!candidate.empty()) opt.candidate_file = candidate;

    std::string command = app.get_subcommands().front()->get_name();
    return fihde::run_command(command, scenario, opt);
}
