#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "fihde/report_io.hpp"
#include "fihde/scenario.hpp"

using namespace fihde;

namespace {

std::string scenario_path(const char* name) {
    return std::string(FIHDE_SCENARIO_DIR) + "/" + name;
}

const char* kMinimal = R"(name = mini
[problem]
psi = "0"
aleph1 = "0"
aleph2 = "0"
)";

}  // namespace

TEST_CASE("shipped scenarios parse and validate") {
    for (const char* name : {"constant.scn", "powerlaw.scn", "logistic.scn",
                             "badsplit.scn"}) {
        CAPTURE(name);
        Scenario sc = load_scenario_file(scenario_path(name));
        CHECK(!sc.name.empty());
        CHECK(sc.n >= 2);
    }
    Scenario sc = load_scenario_file(scenario_path("logistic.scn"));
    CHECK(sc.problem.alpha == 0.8);
    CHECK(sc.problem.v0 == 0.3);
    CHECK(sc.n == 512);
    CHECK(sc.kind == MixedKind::A);
    CHECK(sc.has_bracket());
    CHECK(sc.problem.n1.has_value());
    CHECK(sc.box.v_hi == 1.1);
    CHECK(sc.out_dir == "out");
}

TEST_CASE("defaults fill unspecified sections") {
    Scenario sc = parse_scenario(kMinimal);
    CHECK(sc.name == "mini");
    CHECK(sc.n == 256);
    CHECK(sc.solver.tol == 1e-10);
    CHECK(sc.kind == MixedKind::A);
    CHECK(!sc.has_bracket());
    CHECK(sc.box.v_lo == -1.0);  // v0 = 0 by default
    CHECK(sc.box.v_hi == 1.0);
    CHECK(sc.out_dir == ".");
    CHECK(sc.problem.policy == DomainPolicy::Clamp);
}

TEST_CASE("serialization is a fixed point of parse") {
    for (const char* name : {"constant.scn", "powerlaw.scn", "logistic.scn",
                             "badsplit.scn"}) {
        CAPTURE(name);
        Scenario sc = load_scenario_file(scenario_path(name));
        std::string once = serialize_scenario(sc);
        std::string twice = serialize_scenario(parse_scenario(once));
        CHECK(once == twice);
    }
    std::string once = serialize_scenario(parse_scenario(kMinimal));
    CHECK(once == serialize_scenario(parse_scenario(once)));
}

TEST_CASE("expressions are normalized in the canonical form") {
    std::string text = std::string(kMinimal) + "\n[bracket]\nsigma0 = \"0.5+(s)\"\nrho0 = \"1\"\n";
    Scenario sc = parse_scenario(text);
    std::string canon = serialize_scenario(sc);
    CHECK(canon.find("sigma0 = \"0.5 + s\"") != std::string::npos);
}

TEST_CASE("unknown keys and sections are rejected") {
    CHECK_THROWS_AS(parse_scenario(std::string(kMinimal) + "typo_key = 3\n"),
                    ConfigError);
    CHECK_THROWS_AS(parse_scenario(std::string(kMinimal) + "[nonsense]\nx = 1\n"),
                    ConfigError);
    try {
        parse_scenario(std::string(kMinimal) + "[solver]\ntoll = 1e-9\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("toll") != std::string::npos);
        CHECK(std::string(e.what()).find("line") != std::string::npos);
    }
}

TEST_CASE("duplicate keys are rejected") {
    std::string text = std::string(kMinimal) + "[solver]\ntol = 1e-8\ntol = 1e-9\n";
    CHECK_THROWS_AS(parse_scenario(text), ConfigError);
}

TEST_CASE("missing required fields are rejected") {
    CHECK_THROWS_AS(parse_scenario("name = x\n[problem]\npsi = \"0\"\n"), ConfigError);
    CHECK_THROWS_AS(parse_scenario("[problem]\npsi = \"0\"\naleph1 = \"0\"\naleph2 = \"0\"\n"),
                    ConfigError);  // missing name
}

TEST_CASE("expression errors carry location context") {
    std::string text = "name = x\n[problem]\npsi = \"sin(s\"\naleph1 = \"0\"\naleph2 = \"0\"\n";
    try {
        parse_scenario(text);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        std::string msg = e.what();
        CHECK(msg.find("psi") != std::string::npos);
        CHECK(msg.find("offset 5") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_scenario(std::string(kMinimal) + "[bracket]\nsigma0 = 3\nrho0 = \"1\"\n"),
                    ConfigError);  // expressions must be quoted
}

TEST_CASE("bracket expressions may only use s") {
    std::string text =
        std::string(kMinimal) + "[bracket]\nsigma0 = \"v\"\nrho0 = \"1\"\n";
    CHECK_THROWS_AS(parse_scenario(text), ConfigError);
    std::string half =
        std::string(kMinimal) + "[bracket]\nsigma0 = \"0\"\n";
    CHECK_THROWS_AS(parse_scenario(half), ConfigError);  // needs both or neither
}

TEST_CASE("enumerated fields are validated") {
    CHECK_THROWS_AS(parse_scenario(std::string(kMinimal) + "[bracket]\nkind = C\n"),
                    ConfigError);
    std::string bad_policy = R"(name = x
[problem]
psi = "0"
aleph1 = "0"
aleph2 = "0"
domain_policy = lenient
)";
    CHECK_THROWS_AS(parse_scenario(bad_policy), ConfigError);
    CHECK_THROWS_AS(parse_scenario(std::string(kMinimal) + "[solver]\ntol = abc\n"),
                    ConfigError);
    CHECK_THROWS_AS(parse_scenario(std::string(kMinimal) + "[problem and more]\n"),
                    ConfigError);
}

TEST_CASE("comments and blank lines are ignored") {
    std::string text = R"(# leading comment
name = mini   # trailing comment

[problem]
# a comment between keys
psi = "0"
aleph1 = "0"
aleph2 = "0"
)";
    Scenario sc = parse_scenario(text);
    CHECK(sc.name == "mini");
}

TEST_CASE("hash is stable and value-sensitive") {
    Scenario sc = load_scenario_file(scenario_path("logistic.scn"));
    std::string h1 = scenario_hash(sc);
    std::string h2 = scenario_hash(parse_scenario(serialize_scenario(sc)));
    CHECK(h1 == h2);
    CHECK(h1.size() == 16);
    Scenario other = sc;
    other.problem.v0 = 0.31;
    CHECK(scenario_hash(other) != h1);
}

TEST_CASE("curve CSV round-trips onto the scenario grid") {
    Scenario sc = load_scenario_file(scenario_path("constant.scn"));
    Grid g = sc.problem.make_grid(sc.n);
    GridFunction f = GridFunction::sample(g, [](double s) { return 0.25 + 0.5 * s; });
    std::string csv = curve_csv(f);
    GridFunction back = read_curve_csv(csv, g);
    CHECK(back.values() == f.values());

    Grid other = sc.problem.make_grid(sc.n / 2);
    CHECK_THROWS_AS(read_curve_csv(csv, other), DataError);
    CHECK_THROWS_AS(read_curve_csv("s,v\n0,1\n", g), DataError);
    CHECK_THROWS_AS(read_curve_csv("s,v\n0,zero\n", g), DataError);
}

TEST_CASE("bracket CSV thins long iterate families") {
    Grid g(0, 1, 4);
    std::vector<GridFunction> sigma, rho;
    for (int t = 0; t < 40; ++t) {
        sigma.push_back(GridFunction::constant(g, 0.1 * t));
        rho.push_back(GridFunction::constant(g, 1.0 - 0.01 * t));
    }
    std::string csv = bracket_csv(sigma, rho, 9);
    std::string header = csv.substr(0, csv.find('\n'));
    CHECK(header.find("sigma_0,") != std::string::npos);
    CHECK(header.find("sigma_39") != std::string::npos);
    CHECK(header.find("rho_39") != std::string::npos);
    // 1 s-column + 9 sigma + 9 rho.
    CHECK(std::count(header.begin(), header.end(), ',') == 18);
}

TEST_CASE("report JSON carries the schema tag") {
    SolveReport sr;
    CHECK(solve_report_json(sr).at("schema") == 1);
    BracketReport br;
    CHECK(bracket_report_json(br).at("schema") == 1);
    HypothesisReport hr;
    CHECK(hypothesis_report_json(hr).at("schema") == 1);
    UniquenessReport ur;
    CHECK(uniqueness_report_json(ur).at("schema") == 1);
}

TEST_CASE("shortest round-trip formatting") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1e-06) == "1e-06");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(0.30000000000000004) == "0.30000000000000004");
}
