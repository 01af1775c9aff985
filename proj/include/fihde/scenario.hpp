#pragma once

#include <string>

#include "fihde/monotone.hpp"
#include "fihde/problem.hpp"
#include "fihde/solver.hpp"

namespace fihde {

// One scenario file: the problem instance plus everything a command needs to
// run it. Parsing is strict: unknown sections or keys are errors, duplicates
// are errors, and the whole file is validated before any computation starts.
struct Scenario {
    std::string name;
    ProblemSpec problem;
    int n = 256;
    SolverConfig solver;
    MixedKind kind = MixedKind::A;
    Expr sigma0;  // bracket endpoints as expressions in s (empty when absent)
    Expr rho0;
    double width_tol = 1e-6;
    int max_steps = 30;
    SamplingBox box;
    std::string out_dir = ".";

    bool has_bracket() const { return !sigma0.empty() && !rho0.empty(); }

    GridFunction sigma0_curve() const;
    GridFunction rho0_curve() const;
    GridFunction initial_guess() const;  // constant v0 on the scenario grid
};

// Throws ConfigError (with a line reference) on any malformed input.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario_file(const std::string& path);

// Canonical form: fixed section and key order, shortest round-trip numbers,
// expressions re-printed from their parse trees. serialize(parse(x)) is a
// fixed point of parse-then-serialize.
std::string serialize_scenario(const Scenario& sc);

// FNV-1a 64-bit hash of the canonical form, as 16 hex digits.
std::string scenario_hash(const Scenario& sc);

}  // namespace fihde
