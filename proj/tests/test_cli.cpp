// End-to-end checks of the installed CLI: exit codes, emitted files, and
// golden agreement, driven through the real binary.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "fihde/report_io.hpp"
#include "fihde/scenario.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::string kCli = FIHDE_CLI_PATH;
const std::string kScenarios = FIHDE_SCENARIO_DIR;
const std::string kGoldens = FIHDE_GOLDEN_DIR;

fs::path work_dir() {
    static fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "fihde_cli_test";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

struct RunResult {
    int exit_code;
    std::string stderr_text;
};

RunResult run(const std::string& args, const std::string& extra_env = "") {
    fs::path errfile = work_dir() / "stderr.txt";
    std::string cmd = extra_env + kCli + " " + args + " 2>" + errfile.string();
    int raw = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WEXITSTATUS(raw);
    std::ifstream in(errfile);
    r.stderr_text.assign(std::istreambuf_iterator<char>(in),
                         std::istreambuf_iterator<char>());
    return r;
}

std::string scenario(const char* name) { return kScenarios + "/" + name; }

json read_json(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    return json::parse(in);
}

}  // namespace

TEST_CASE("solve: constant scenario emits the flat curve") {
    fs::path out = work_dir() / "solve_const";
    RunResult r = run("solve " + scenario("constant.scn") + " --out " + out.string());
    CHECK(r.exit_code == 0);
    json rep = read_json(out / "constant_solve.json");
    CHECK(rep.at("schema") == 1);
    CHECK(rep.at("converged") == true);
    CHECK(rep.at("escape_nodes") == 0);

    fihde::Scenario sc = fihde::load_scenario_file(scenario("constant.scn"));
    fihde::GridFunction curve = fihde::read_curve_csv(
        fihde::read_text_file((out / "constant_solution.csv").string()),
        sc.problem.make_grid(sc.n));
    for (int i = 0; i < curve.size(); ++i) CHECK(curve[i] == 0.0);
}

TEST_CASE("solve: malformed expression gives exit 1 with a location") {
    fs::path bad = work_dir() / "broken.scn";
    fihde::write_text_file(bad.string(),
                           "name = broken\n[problem]\npsi = \"sin(s\"\n"
                           "aleph1 = \"0\"\naleph2 = \"0\"\n");
    RunResult r = run("solve " + bad.string());
    CHECK(r.exit_code == 1);
    CHECK(r.stderr_text.find("offset") != std::string::npos);
}

TEST_CASE("solve: missing scenario file gives exit 1") {
    RunResult r = run("solve /does/not/exist.scn");
    CHECK(r.exit_code == 1);
}

TEST_CASE("solve: logistic output matches the shipped golden curve") {
    fs::path out = work_dir() / "solve_log";
    RunResult r = run("solve " + scenario("logistic.scn") + " --out " + out.string());
    CHECK(r.exit_code == 0);

    fihde::Scenario sc = fihde::load_scenario_file(scenario("logistic.scn"));
    fihde::GridFunction curve = fihde::read_curve_csv(
        fihde::read_text_file((out / "logistic_solution.csv").string()),
        sc.problem.make_grid(sc.n));
    fihde::GoldenFile golden =
        fihde::read_golden_file(kGoldens + "/logistic_solve.csv");
    REQUIRE(static_cast<int>(golden.rows.size()) == curve.size());
    for (int i = 0; i < curve.size(); ++i) {
        CHECK(std::fabs(curve[i] - golden.rows[static_cast<std::size_t>(i)][1]) <=
              1e-6);
    }
}

TEST_CASE("bracket: logistic run converges and matches the golden widths") {
    fs::path out = work_dir() / "bracket_log";
    RunResult r = run("bracket " + scenario("logistic.scn") + " --out " + out.string());
    CHECK(r.exit_code == 0);
    json rep = read_json(out / "logistic_bracket.json");
    CHECK(rep.at("converged") == true);
    CHECK(rep.at("kind") == "A");
    CHECK(rep.at("monotonicity_violations").empty());
    CHECK(rep.contains("uniqueness"));
    CHECK(rep.at("uniqueness").at("pass") == true);

    fihde::GoldenFile golden =
        fihde::read_golden_file(kGoldens + "/logistic_bracket_a.csv");
    auto widths = rep.at("width_history").get<std::vector<double>>();
    REQUIRE(widths.size() == golden.rows.size());
    for (std::size_t t = 0; t < widths.size(); ++t) {
        CHECK(std::fabs(widths[t] - golden.rows[t][1]) <= 1e-8);
    }

    // The iterates CSV exists and starts from the initial pair.
    std::string csv = fihde::read_text_file((out / "logistic_bracket.csv").string());
    CHECK(csv.find("sigma_0") != std::string::npos);
    CHECK(csv.find("rho_0") != std::string::npos);
}

TEST_CASE("bracket: collapsed pair emits a single column pair") {
    fs::path out = work_dir() / "bracket_const";
    RunResult r = run("bracket " + scenario("constant.scn") + " --out " + out.string());
    CHECK(r.exit_code == 0);
    std::string csv = fihde::read_text_file((out / "constant_bracket.csv").string());
    std::string header = csv.substr(0, csv.find('\n'));
    CHECK(header == "s,sigma_0,rho_0");
    json rep = read_json(out / "constant_bracket.json");
    CHECK(rep.at("steps") == 0);
}

TEST_CASE("bracket: broken split exits 3 with a witness") {
    fs::path out = work_dir() / "bracket_bad";
    RunResult r = run("bracket " + scenario("badsplit.scn") + " --out " + out.string());
    CHECK(r.exit_code == 3);
    json rep = read_json(out / "badsplit_bracket.json");
    CHECK(rep.at("error") == "monotonicity");
    CHECK(rep.at("witness").at("step") == 1);
    CHECK(rep.at("witness").at("magnitude").get<double>() > 0.0);
}

TEST_CASE("hypotheses: verdict-driven exit codes") {
    fs::path out = work_dir() / "hyp";
    RunResult ok = run("hypotheses " + scenario("logistic.scn") + " --out " + out.string());
    CHECK(ok.exit_code == 0);
    json rep = read_json(out / "logistic_hypotheses.json");
    CHECK(rep.at("all_hold") == true);
    CHECK(rep.at("checks").size() == 6);  // a1 a2 b1 b2 (x2) b3

    RunResult bad = run("hypotheses " + scenario("badsplit.scn") + " --out " + out.string());
    CHECK(bad.exit_code == 4);
    json brep = read_json(out / "badsplit_hypotheses.json");
    CHECK(brep.at("all_hold") == false);
    bool found_b2 = false;
    for (const auto& c : brep.at("checks")) {
        if (c.at("name") == "b2_aleph1") {
            found_b2 = true;
            CHECK(c.at("holds") == false);
            CHECK(c.at("witness").contains("v"));
        }
    }
    CHECK(found_b2);
}

TEST_CASE("verify: scenario pair and candidate files") {
    fs::path out = work_dir() / "verify";
    RunResult pair = run("verify " + scenario("logistic.scn") + " --out " + out.string());
    CHECK(pair.exit_code == 0);
    json prep = read_json(out / "logistic_verify.json");
    CHECK(prep.at("pass") == true);
    CHECK(prep.at("kind") == "A");

    // The high constant verifies as lower, the low one as upper.
    fihde::Scenario sc = fihde::load_scenario_file(scenario("logistic.scn"));
    fs::path hi = work_dir() / "hi.csv";
    fs::path lo = work_dir() / "lo.csv";
    fihde::write_text_file(
        hi.string(),
        fihde::curve_csv(fihde::GridFunction::constant(sc.problem.make_grid(sc.n), 1.0)));
    fihde::write_text_file(
        lo.string(),
        fihde::curve_csv(fihde::GridFunction::constant(sc.problem.make_grid(sc.n), 0.05)));

    CHECK(run("verify " + scenario("logistic.scn") + " --role lower --candidate " +
              hi.string() + " --out " + out.string())
              .exit_code == 0);
    CHECK(run("verify " + scenario("logistic.scn") + " --role upper --candidate " +
              lo.string() + " --out " + out.string())
              .exit_code == 0);
    CHECK(run("verify " + scenario("logistic.scn") + " --role lower --candidate " +
              lo.string() + " --out " + out.string())
              .exit_code == 4);

    // Grid mismatch: candidate sampled at a different resolution.
    fs::path coarse = work_dir() / "coarse.csv";
    fihde::write_text_file(
        coarse.string(),
        fihde::curve_csv(fihde::GridFunction::constant(sc.problem.make_grid(128), 1.0)));
    CHECK(run("verify " + scenario("logistic.scn") + " --role lower --candidate " +
              coarse.string() + " --out " + out.string())
              .exit_code == 1);

    // Role lower without a candidate file is an input error.
    CHECK(run("verify " + scenario("logistic.scn") + " --role lower --out " +
              out.string())
              .exit_code == 1);
}

TEST_CASE("convergence: floors and observed order") {
    fs::path out = work_dir() / "conv";
    RunResult flat = run("convergence " + scenario("constant.scn") + " --grids 64,128,256 --out " +
                         out.string());
    CHECK(flat.exit_code == 0);
    std::string csv = fihde::read_text_file((out / "constant_convergence.csv").string());
    CHECK(csv.find("n_coarse,n_fine,sup_diff,observed_order") == 0);
    CHECK(csv.find("64,128,0,") != std::string::npos);  // exact zeros

    RunResult pl = run("convergence " + scenario("powerlaw.scn") + " --grids 64,128,256 --out " +
                       out.string());
    CHECK(pl.exit_code == 0);
    std::string pcsv =
        fihde::read_text_file((out / "powerlaw_convergence.csv").string());
    // Differences sit at the quadrature floor for the exact power-law case.
    std::istringstream lines(pcsv);
    std::string line;
    std::getline(lines, line);
    while (std::getline(lines, line)) {
        auto first = line.find(',');
        auto second = line.find(',', first + 1);
        auto third = line.find(',', second + 1);
        double diff = std::stod(line.substr(second + 1, third - second - 1));
        CHECK(diff <= 1e-12);
    }

    RunResult lg = run("convergence " + scenario("logistic.scn") + " --grids 128,256,512 --out " +
                       out.string());
    CHECK(lg.exit_code == 0);
    std::string lcsv =
        fihde::read_text_file((out / "logistic_convergence.csv").string());
    auto last_comma = lcsv.find_last_of(',');
    double order = std::stod(lcsv.substr(last_comma + 1));
    CHECK(order >= 1.5);
}

TEST_CASE("output directory precedence") {
    fs::path env_dir = work_dir() / "env_out";
    fs::path cli_dir = work_dir() / "cli_out";
    std::string env_prefix = "FIHDE_OUT=" + env_dir.string() + " ";

    RunResult via_env = run("solve " + scenario("constant.scn") + " --quiet", env_prefix);
    CHECK(via_env.exit_code == 0);
    CHECK(fs::exists(env_dir / "constant_solution.csv"));
    CHECK(via_env.stderr_text.empty());  // --quiet silences progress

    RunResult via_flag = run("solve " + scenario("constant.scn") + " --quiet --out " +
                                 cli_dir.string(),
                             env_prefix);
    CHECK(via_flag.exit_code == 0);
    CHECK(fs::exists(cli_dir / "constant_solution.csv"));
}

TEST_CASE("grid override changes the emitted resolution") {
    fs::path out = work_dir() / "n_override";
    RunResult r = run("solve " + scenario("constant.scn") + " --n 64 --out " + out.string());
    CHECK(r.exit_code == 0);
    std::string csv = fihde::read_text_file((out / "constant_solution.csv").string());
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 66);  // header + 65 nodes
}

TEST_CASE("help exits cleanly") {
    CHECK(run("--help >/dev/null").exit_code == 0);
    CHECK(run("bogus-subcommand 2>/dev/null").exit_code == 1);
}
