// Maintainer tool: writes and re-checks the golden reference files under
// data/golden/. Every golden regenerates bit-identically from its own
// provenance header.

#include <ctime>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fihde/commands.hpp"
#include "fihde/report_io.hpp"

namespace {

std::string today_utc() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[16];
    std::strftime(buf, sizeof buf, "%Y-%m-%d", &tm);
    return buf;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fihde-golden: generate and check golden reference files"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string file_path;
    std::string kind = "solve";
    std::string date;
    fihde::OracleConfig cfg;

    CLI::App* gen = app.add_subcommand("generate", "write a golden file");
    gen->add_option("scenario", scenario_path, "scenario file")->required();
    gen->add_option("output", file_path, "golden file to write")->required();
    gen->add_option("--kind", kind, "solve | bracket")
        ->check(CLI::IsMember({"solve", "bracket"}));
    gen->add_option("--dense-n", cfg.dense_n, "dense reference resolution");
    gen->add_option("--dense-tol", cfg.dense_tol, "dense reference tolerance");
    gen->add_option("--stride", cfg.stride, "node subsampling stride");
    gen->add_option("--date", date, "provenance date (default: today, UTC)");

    CLI::App* check = app.add_subcommand("check", "regenerate and byte-compare");
    check->add_option("scenario", scenario_path, "scenario file")->required();
    check->add_option("golden", file_path, "golden file to check")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        fihde::Scenario sc = fihde::load_scenario_file(scenario_path);
        if (app.got_subcommand(gen)) {
            if (date.empty()) date = today_utc();
            std::string bytes = kind == "solve"
                                    ? fihde::make_solve_golden_bytes(sc, cfg, date)
                                    : fihde::make_bracket_golden_bytes(sc, date);
            fihde::write_text_file(file_path, bytes);
            std::cerr << "wrote " << file_path << " (" << bytes.size() << " bytes)\n";
            return 0;
        }
        std::string original = fihde::read_text_file(file_path);
        std::string regenerated =
            fihde::regenerate_golden_bytes(sc, fihde::parse_golden(original));
        if (original == regenerated) {
            std::cerr << file_path << ": regenerates bit-identically\n";
            return 0;
        }
        std::cerr << file_path << ": MISMATCH against regeneration\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
