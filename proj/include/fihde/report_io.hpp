#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "fihde/monotone.hpp"
#include "fihde/problem.hpp"
#include "fihde/solver.hpp"

namespace fihde {

// Shortest decimal representation that round-trips to the same double; used
// for every number written to CSV so goldens stay bit-stable.
std::string format_double(double value);

std::string curve_csv(const GridFunction& f);  // "s,v" rows

// Columns s, sigma_0..sigma_T, rho_0..rho_T, thinned to at most max_iterates
// per family (first and last always kept).
std::string bracket_csv(const std::vector<GridFunction>& sigma_iterates,
                        const std::vector<GridFunction>& rho_iterates,
                        int max_iterates = 17);

// Reads a two-column curve CSV back onto the given grid; node positions must
// match within round-off slack.
GridFunction read_curve_csv(const std::string& text, const Grid& grid,
                            Interp interp = Interp::PchipMonotone);

nlohmann::json solve_report_json(const SolveReport& report);
nlohmann::json bracket_report_json(const BracketReport& report);
nlohmann::json hypothesis_report_json(const HypothesisReport& report);
nlohmann::json lower_upper_report_json(const LowerUpperReport& report);
nlohmann::json mixed_pair_report_json(const MixedPairReport& report);
nlohmann::json uniqueness_report_json(const UniquenessReport& report);

// Golden files: a '#'-prefixed JSON provenance line, then CSV. Regeneration
// reuses the stored header so the bytes reproduce exactly.
struct GoldenFile {
    nlohmann::json header;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

std::string golden_bytes(const nlohmann::json& header,
                         const std::vector<std::string>& columns,
                         const std::vector<std::vector<double>>& rows);
GoldenFile parse_golden(const std::string& bytes);
GoldenFile read_golden_file(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace fihde
