#include "fihde/report_io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fihde {

using nlohmann::json;

std::string format_double(double value) {
    std::array<char, 64> buf;
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    (void)ec;
    return std::string(buf.data(), ptr);
}

std::string curve_csv(const GridFunction& f) {
    std::ostringstream os;
    os << "s,v\n";
    for (int i = 0; i < f.size(); ++i) {
        os << format_double(f.grid().node(i)) << ',' << format_double(f[i]) << '\n';
    }
    return os.str();
}

namespace {

std::vector<int> thin_indices(int count, int keep) {
    std::vector<int> idx;
    if (count <= keep) {
        for (int i = 0; i < count; ++i) idx.push_back(i);
        return idx;
    }
    // Even stride, first and last forced in.
    for (int i = 0; i < keep - 1; ++i) {
        idx.push_back(i * (count - 1) / (keep - 1));
    }
    idx.push_back(count - 1);
    return idx;
}

}  // namespace

std::string bracket_csv(const std::vector<GridFunction>& sigma_iterates,
                        const std::vector<GridFunction>& rho_iterates,
                        int max_iterates) {
    if (sigma_iterates.empty() || sigma_iterates.size() != rho_iterates.size()) {
        throw DataError("bracket_csv needs matching non-empty iterate families");
    }
    std::vector<int> keep = thin_indices(static_cast<int>(sigma_iterates.size()),
                                         max_iterates);
    std::ostringstream os;
    os << "s";
    for (int t : keep) os << ",sigma_" << t;
    for (int t : keep) os << ",rho_" << t;
    os << '\n';
    const GridFunction& first = sigma_iterates.front();
    for (int i = 0; i < first.size(); ++i) {
        os << format_double(first.grid().node(i));
        for (int t : keep) {
            os << ',' << format_double(sigma_iterates[static_cast<std::size_t>(t)][i]);
        }
        for (int t : keep) {
            os << ',' << format_double(rho_iterates[static_cast<std::size_t>(t)][i]);
        }
        os << '\n';
    }
    return os.str();
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        std::size_t pos = line.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

double parse_double(const std::string& text, int line) {
    double out = 0.0;
    const char* b = text.data();
    const char* e = b + text.size();
    auto [ptr, ec] = std::from_chars(b, e, out);
    if (ec != std::errc{} || ptr != e) {
        std::ostringstream os;
        os << "CSV line " << line << ": bad number '" << text << "'";
        throw DataError(os.str());
    }
    return out;
}

}  // namespace

GridFunction read_curve_csv(const std::string& text, const Grid& grid, Interp interp) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(grid.n) + 1);
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.front() == '#') continue;
        if (!header_seen) {
            header_seen = true;  // "s,v"
            continue;
        }
        auto fields = split(line, ',');
        if (fields.size() != 2) {
            std::ostringstream os;
            os << "CSV line " << lineno << ": expected 2 columns";
            throw DataError(os.str());
        }
        double s = parse_double(fields[0], lineno);
        double v = parse_double(fields[1], lineno);
        int i = static_cast<int>(values.size());
        if (i > grid.n || std::fabs(s - grid.node(i)) > 1e-9 * std::max(1.0, grid.length)) {
            std::ostringstream os;
            os << "CSV line " << lineno << ": node " << s
               << " does not match the scenario grid";
            throw DataError(os.str());
        }
        values.push_back(v);
    }
    if (values.size() != static_cast<std::size_t>(grid.n) + 1) {
        std::ostringstream os;
        os << "curve has " << values.size() << " rows, grid needs " << grid.n + 1;
        throw DataError(os.str());
    }
    return GridFunction(grid, std::move(values), interp);
}

namespace {

json witness_json(const Witness& w) {
    return json{{"s", w.s}, {"v", w.v}, {"z", w.z}};
}

json side_json(const SideDefect& side) {
    return json{{"worst", side.worst},
                {"worst_node", side.worst_node},
                {"endpoint_ok", side.endpoint_ok},
                {"pass", side.pass},
                {"defect", side.defect}};
}

}  // namespace

json solve_report_json(const SolveReport& report) {
    return json{{"schema", 1},
                {"converged", report.converged},
                {"outer_iters", report.outer_iters},
                {"residual_history", report.residual_history},
                {"final_residual", report.final_residual},
                {"escape_nodes", report.escape_nodes},
                {"contraction_estimate", report.contraction_estimate},
                {"apriori_radius", report.apriori_radius}};
}

json bracket_report_json(const BracketReport& report) {
    json violations = json::array();
    for (const auto& v : report.violations) {
        violations.push_back(
            json{{"step", v.step}, {"node", v.node}, {"magnitude", v.magnitude}});
    }
    json out{{"schema", 1},
             {"kind", report.kind == MixedKind::A ? "A" : "B"},
             {"converged", report.converged},
             {"steps", report.steps},
             {"width_history", report.width_history},
             {"monotonicity_violations", violations},
             {"limit_defect_sigma", report.limit_defect_sigma},
             {"limit_defect_rho", report.limit_defect_rho},
             {"exact_mixed_solution_input", report.exact_mixed_solution_input},
             {"composition_escapes", report.composition_escapes},
             {"notes", report.notes}};
    return out;
}

json hypothesis_report_json(const HypothesisReport& report) {
    json checks = json::array();
    for (const auto& c : report.checks) {
        checks.push_back(json{{"name", c.name},
                              {"holds", c.holds},
                              {"worst_violation", c.worst_violation},
                              {"witness", witness_json(c.witness)},
                              {"third_slot_sensitive", c.third_slot_sensitive},
                              {"note", c.note}});
    }
    return json{{"schema", 1},
                {"box",
                 json{{"v_lo", report.box.v_lo},
                      {"v_hi", report.box.v_hi},
                      {"s_samples", report.box.s_samples},
                      {"v_samples", report.box.v_samples},
                      {"w_samples", report.box.w_samples},
                      {"tol_check", report.box.tol_check}}},
                {"checks", checks},
                {"all_hold", report.all_hold()}};
}

json lower_upper_report_json(const LowerUpperReport& report) {
    return json{{"schema", 1},
                {"role", report.role == Role::Lower ? "lower" : "upper"},
                {"tol_defect", report.tol_defect},
                {"endpoint_value", report.endpoint_value},
                {"v0", report.v0},
                {"side", side_json(report.side)},
                {"pass", report.pass()}};
}

json mixed_pair_report_json(const MixedPairReport& report) {
    json out{{"schema", 1},
             {"kind", report.kind == MixedKind::A ? "A" : "B"},
             {"tol_defect", report.tol_defect},
             {"ordered", report.ordered},
             {"sigma_side", side_json(report.sigma_side)},
             {"rho_side", side_json(report.rho_side)},
             {"sigma_endpoint_ok", report.sigma_endpoint_ok},
             {"rho_endpoint_ok", report.rho_endpoint_ok},
             {"exact_mixed_solution", report.exact_mixed_solution},
             {"pass", report.pass()}};
    if (report.order_violation) {
        out["order_violation"] = json{{"node", report.order_violation->node},
                                      {"magnitude", report.order_violation->magnitude}};
    }
    return out;
}

json uniqueness_report_json(const UniquenessReport& report) {
    return json{{"schema", 1},
                {"n_conditions_hold", report.n_conditions_hold},
                {"worst_excess_n1", report.worst_excess_n1},
                {"worst_excess_n2", report.worst_excess_n2},
                {"witness_n1", witness_json(report.witness_n1)},
                {"witness_n2", witness_json(report.witness_n2)},
                {"width", report.width},
                {"collapse_tol", report.collapse_tol},
                {"collapsed", report.collapsed},
                {"pass", report.pass()}};
}

std::string golden_bytes(const json& header, const std::vector<std::string>& columns,
                         const std::vector<std::vector<double>>& rows) {
    std::ostringstream os;
    os << "# " << header.dump() << '\n';
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (c) os << ',';
        os << columns[c];
    }
    os << '\n';
    for (const auto& row : rows) {
        if (row.size() != columns.size()) {
            throw DataError("golden row width does not match the column count");
        }
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) os << ',';
            os << format_double(row[c]);
        }
        os << '\n';
    }
    return os.str();
}

GoldenFile parse_golden(const std::string& bytes) {
    std::istringstream in(bytes);
    std::string line;
    if (!std::getline(in, line) || line.size() < 2 || line[0] != '#') {
        throw DataError("golden file is missing its provenance header");
    }
    GoldenFile g;
    g.header = json::parse(line.substr(1));
    if (!std::getline(in, line)) {
        throw DataError("golden file is missing its column header");
    }
    g.columns = split(line, ',');
    int lineno = 2;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto fields = split(line, ',');
        if (fields.size() != g.columns.size()) {
            std::ostringstream os;
            os << "golden line " << lineno << ": expected " << g.columns.size()
               << " columns";
            throw DataError(os.str());
        }
        std::vector<double> row;
        row.reserve(fields.size());
        for (const auto& f : fields) row.push_back(parse_double(f, lineno));
        g.rows.push_back(std::move(row));
    }
    return g;
}

GoldenFile read_golden_file(const std::string& path) {
    return parse_golden(read_text_file(path));
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(p.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << content;
    if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace fihde
