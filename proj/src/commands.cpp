#include "fihde/commands.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <limits>
#include <sstream>

#include "fihde/report_io.hpp"

namespace fihde {

using nlohmann::json;

namespace {

std::string out_path(const Scenario& sc, const std::string& suffix) {
    std::filesystem::path dir(sc.out_dir);
    return (dir / (sc.name + suffix)).string();
}

void info(const CmdOptions& opt, const std::string& msg) {
    if (!opt.quiet) std::cerr << msg << '\n';
}

}  // namespace

Scenario apply_overrides(Scenario sc, const CmdOptions& opt) {
    if (const char* env = std::getenv("FIHDE_OUT"); env && *env) {
        sc.out_dir = env;
    }
    if (opt.out_dir) sc.out_dir = *opt.out_dir;
    if (opt.n) {
        sc.n = *opt.n;
        if (sc.n < 2) throw ConfigError("--n must be at least 2");
    }
    if (opt.tol) {
        sc.solver.tol = *opt.tol;
        sc.solver.validate();
    }
    if (opt.kind) sc.kind = *opt.kind;
    return sc;
}

int cmd_solve(const Scenario& sc, const CmdOptions& opt) {
    auto [v, report] = solve_fihie(sc.problem, sc.solver, sc.initial_guess());
    write_text_file(out_path(sc, "_solution.csv"), curve_csv(v));
    json j = solve_report_json(report);
    j["scenario"] = sc.name;
    j["n"] = sc.n;
    write_text_file(out_path(sc, "_solve.json"), j.dump(2) + "\n");

    std::ostringstream os;
    os << "solve '" << sc.name << "': " << (report.converged ? "converged" : "NOT converged")
       << " in " << report.outer_iters << " sweeps, residual " << report.final_residual;
    info(opt, os.str());
    return report.converged ? exit_code::ok : exit_code::no_convergence;
}

int cmd_bracket(const Scenario& sc, const CmdOptions& opt) {
    if (!sc.has_bracket()) {
        throw ConfigError("scenario '" + sc.name + "' has no bracket section");
    }
    GridFunction sigma0 = sc.sigma0_curve();
    GridFunction rho0 = sc.rho0_curve();
    StopRule stop{sc.width_tol, sc.max_steps};

    BracketReport report;
    try {
        report = iterate_extremal(sc.problem, sigma0, rho0, sc.kind, sc.solver, stop);
    } catch (const MonotonicityError& e) {
        json j{{"schema", 1},
               {"scenario", sc.name},
               {"error", "monotonicity"},
               {"message", e.what()},
               {"witness", json{{"step", e.step}, {"node", e.node},
                                {"magnitude", e.magnitude}}}};
        write_text_file(out_path(sc, "_bracket.json"), j.dump(2) + "\n");
        info(opt, std::string("bracket '") + sc.name + "': " + e.what());
        return exit_code::monotonicity;
    }

    write_text_file(out_path(sc, "_bracket.csv"),
                    bracket_csv(report.sigma_iterates, report.rho_iterates));
    json j = bracket_report_json(report);
    j["scenario"] = sc.name;
    if (report.converged && sc.problem.n1 && sc.problem.n2) {
        UniquenessReport uq =
            check_uniqueness(sc.problem, report.sigma, report.rho, sc.width_tol);
        j["uniqueness"] = uniqueness_report_json(uq);
    }
    write_text_file(out_path(sc, "_bracket.json"), j.dump(2) + "\n");

    std::ostringstream os;
    os << "bracket '" << sc.name << "': " << (report.converged ? "converged" : "NOT converged")
       << " after " << report.steps << " steps, final width "
       << (report.width_history.empty() ? 0.0 : report.width_history.back());
    info(opt, os.str());

    if (!report.violations.empty()) return exit_code::monotonicity;
    if (!report.converged) return exit_code::no_convergence;
    return exit_code::ok;
}

int cmd_verify(const Scenario& sc, const CmdOptions& opt) {
    json j;
    bool pass = false;
    if (opt.role == "pair") {
        if (!sc.has_bracket()) {
            throw ConfigError("role 'pair' verifies the scenario bracket, but '" +
                              sc.name + "' has none");
        }
        MixedPairReport rep =
            verify_mixed_pair(sc.problem, sc.sigma0_curve(), sc.rho0_curve(), sc.kind);
        j = mixed_pair_report_json(rep);
        pass = rep.pass();
    } else {
        if (!opt.candidate_file) {
            throw ConfigError("role '" + opt.role + "' needs --candidate FILE");
        }
        Grid grid = sc.problem.make_grid(sc.n);
        GridFunction candidate =
            read_curve_csv(read_text_file(*opt.candidate_file), grid);
        Role role = opt.role == "lower" ? Role::Lower : Role::Upper;
        LowerUpperReport rep = verify_lower_upper(sc.problem, candidate, role);
        j = lower_upper_report_json(rep);
        pass = rep.pass();
    }
    j["scenario"] = sc.name;
    write_text_file(out_path(sc, "_verify.json"), j.dump(2) + "\n");
    info(opt, "verify '" + sc.name + "' (" + opt.role + "): " + (pass ? "pass" : "FAIL"));
    return pass ? exit_code::ok : exit_code::verification_failed;
}

int cmd_hypotheses(const Scenario& sc, const CmdOptions& opt) {
    std::optional<GridFunction> sigma0, rho0;
    if (sc.has_bracket()) {
        sigma0 = sc.sigma0_curve();
        rho0 = sc.rho0_curve();
    }
    HypothesisReport report = run_hypothesis_checks(
        sc.problem, sc.box, nullptr, sigma0 ? &*sigma0 : nullptr,
        rho0 ? &*rho0 : nullptr, sc.kind);
    json j = hypothesis_report_json(report);
    j["scenario"] = sc.name;
    write_text_file(out_path(sc, "_hypotheses.json"), j.dump(2) + "\n");
    bool pass = report.all_hold();
    info(opt, "hypotheses '" + sc.name + "': " + (pass ? "all hold" : "FAIL"));
    return pass ? exit_code::ok : exit_code::verification_failed;
}

int cmd_convergence(const Scenario& sc, const CmdOptions& opt) {
    std::vector<int> grids = opt.grids;
    if (grids.empty()) grids = {128, 256, 512, 1024};
    for (std::size_t i = 1; i < grids.size(); ++i) {
        if (grids[i] <= grids[i - 1]) {
            throw ConfigError("--grids must be strictly increasing");
        }
    }

    struct Row {
        int n;
        bool ok;
        GridFunction v;
    };
    std::vector<Row> rows;
    for (int n : grids) {
        Scenario run = sc;
        run.n = n;
        try {
            auto [v, rep] = solve_fihie(run.problem, run.solver, run.initial_guess());
            rows.push_back(Row{n, rep.converged, std::move(v)});
        } catch (const Error& e) {
            info(opt, std::string("convergence: n = ") + std::to_string(n) +
                          " failed: " + e.what());
            rows.push_back(Row{n, false, sc.initial_guess()});
        }
    }

    std::ostringstream os;
    os << "n_coarse,n_fine,sup_diff,observed_order\n";
    double prev_diff = std::numeric_limits<double>::quiet_NaN();
    double prev_ratio = 0.0;
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
        const Row& coarse = rows[i];
        const Row& fine = rows[i + 1];
        os << coarse.n << ',' << fine.n << ',';
        if (!coarse.ok || !fine.ok) {
            os << "failed,\n";
            prev_diff = std::numeric_limits<double>::quiet_NaN();
            continue;
        }
        // Compare at the coarse nodes; the fine curve is interpolated (exact
        // when the fine grid nests the coarse one).
        double diff = 0.0;
        for (int k = 0; k <= coarse.v.grid().n; ++k) {
            double s = coarse.v.grid().node(k);
            diff = std::max(diff, std::fabs(coarse.v[k] - fine.v.eval_clamped(s)));
        }
        os << format_double(diff) << ',';
        double ratio = static_cast<double>(fine.n) / coarse.n;
        if (std::isfinite(prev_diff) && diff > 0.0 && prev_ratio == ratio) {
            os << format_double(std::log(prev_diff / diff) / std::log(ratio));
        }
        os << '\n';
        prev_diff = diff;
        prev_ratio = ratio;
    }
    write_text_file(out_path(sc, "_convergence.csv"), os.str());
    info(opt, "convergence '" + sc.name + "': wrote " +
                  std::to_string(rows.size() ? rows.size() - 1 : 0) + " rows");
    return exit_code::ok;
}

int run_command(const std::string& command, const std::string& scenario_path,
                const CmdOptions& opt) {
    try {
        Scenario sc = apply_overrides(load_scenario_file(scenario_path), opt);
        if (command == "solve") return cmd_solve(sc, opt);
        if (command == "bracket") return cmd_bracket(sc, opt);
        if (command == "verify") return cmd_verify(sc, opt);
        if (command == "hypotheses") return cmd_hypotheses(sc, opt);
        if (command == "convergence") return cmd_convergence(sc, opt);
        throw ConfigError("unknown command '" + command + "'");
    } catch (const MonotonicityError& e) {
        if (!opt.quiet) std::cerr << "error: " << e.what() << '\n';
        return exit_code::monotonicity;
    } catch (const SolverError& e) {
        if (!opt.quiet) std::cerr << "error: " << e.what() << '\n';
        return exit_code::no_convergence;
    } catch (const Error& e) {
        if (!opt.quiet) std::cerr << "error: " << e.what() << '\n';
        return exit_code::input_error;
    } catch (const std::exception& e) {
        if (!opt.quiet) std::cerr << "error: " << e.what() << '\n';
        return exit_code::input_error;
    }
}

namespace {

std::vector<std::vector<double>> solve_golden_rows(const Scenario& sc,
                                                   const OracleConfig& cfg) {
    if (cfg.dense_n % cfg.stride != 0) {
        throw ConfigError("golden stride must divide dense_n");
    }
    OracleSolveResult dense = oracle_solve(sc.problem, cfg);
    std::vector<std::vector<double>> rows;
    for (int i = 0; i <= cfg.dense_n; i += cfg.stride) {
        rows.push_back({dense.grid.node(i), dense.values[static_cast<std::size_t>(i)]});
    }
    return rows;
}

std::vector<std::vector<double>> bracket_golden_rows(const Scenario& sc, int n,
                                                     MixedKind kind, double width_tol,
                                                     int max_steps) {
    Scenario run = sc;
    run.n = n;
    run.kind = kind;
    BracketReport rep = iterate_extremal(run.problem, run.sigma0_curve(),
                                         run.rho0_curve(), kind, run.solver,
                                         StopRule{width_tol, max_steps});
    std::vector<std::vector<double>> rows;
    for (std::size_t t = 0; t < rep.width_history.size(); ++t) {
        rows.push_back({static_cast<double>(t), rep.width_history[t]});
    }
    return rows;
}

}  // namespace

std::string make_solve_golden_bytes(const Scenario& sc, const OracleConfig& cfg,
                                    const std::string& date) {
    json header{{"schema", 1},
                {"kind", "solve_curve"},
                {"scenario", sc.name},
                {"scenario_hash", scenario_hash(sc)},
                {"dense_n", cfg.dense_n},
                {"tol", cfg.dense_tol},
                {"max_outer", cfg.max_outer},
                {"stride", cfg.stride},
                {"generator", "oracle_solve"},
                {"date", date}};
    return golden_bytes(header, {"s", "v"}, solve_golden_rows(sc, cfg));
}

std::string make_bracket_golden_bytes(const Scenario& sc, const std::string& date) {
    if (!sc.has_bracket()) {
        throw ConfigError("scenario '" + sc.name + "' has no bracket to pin");
    }
    json header{{"schema", 1},
                {"kind", "bracket_widths"},
                {"scenario", sc.name},
                {"scenario_hash", scenario_hash(sc)},
                {"n", sc.n},
                {"bracket_kind", sc.kind == MixedKind::A ? "A" : "B"},
                {"width_tol", sc.width_tol},
                {"max_steps", sc.max_steps},
                {"generator", "iterate_extremal"},
                {"date", date}};
    return golden_bytes(header, {"t", "width"},
                        bracket_golden_rows(sc, sc.n, sc.kind, sc.width_tol,
                                            sc.max_steps));
}

std::string regenerate_golden_bytes(const Scenario& sc, const GoldenFile& golden) {
    const json& h = golden.header;
    std::string expected = h.at("scenario_hash").get<std::string>();
    if (expected != scenario_hash(sc)) {
        throw DataError("golden provenance hash " + expected +
                        " does not match this scenario (" + scenario_hash(sc) + ")");
    }
    std::string kind = h.at("kind").get<std::string>();
    if (kind == "solve_curve") {
        OracleConfig cfg;
        cfg.dense_n = h.at("dense_n").get<int>();
        cfg.dense_tol = h.at("tol").get<double>();
        cfg.max_outer = h.at("max_outer").get<int>();
        cfg.stride = h.at("stride").get<int>();
        return golden_bytes(h, golden.columns, solve_golden_rows(sc, cfg));
    }
    if (kind == "bracket_widths") {
        MixedKind bk = h.at("bracket_kind").get<std::string>() == "A" ? MixedKind::A
                                                                      : MixedKind::B;
        return golden_bytes(h, golden.columns,
                            bracket_golden_rows(sc, h.at("n").get<int>(), bk,
                                                h.at("width_tol").get<double>(),
                                                h.at("max_steps").get<int>()));
    }
    throw DataError("unknown golden kind '" + kind + "'");
}

}  // namespace fihde
