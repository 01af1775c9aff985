#include "fihde/scenario.hpp"

#include <array>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace fihde {

namespace {

std::string format_double(double value) {
    std::array<char, 64> buf;
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    (void)ec;
    return std::string(buf.data(), ptr);
}

struct RawValue {
    std::string text;
    bool quoted = false;
    int line = 0;
};

struct RawScenario {
    // section -> key -> value; "" is the top-level section.
    std::map<std::string, std::map<std::string, RawValue>> sections;
};

[[noreturn]] void bad_line(int line, const std::string& what) {
    std::ostringstream os;
    os << "scenario line " << line << ": " << what;
    throw ConfigError(os.str());
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

RawScenario tokenize(const std::string& text) {
    RawScenario raw;
    std::string section;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        // Strip comments outside quotes.
        bool in_string = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') in_string = !in_string;
            if (line[i] == '#' && !in_string) {
                line.erase(i);
                break;
            }
        }
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') bad_line(lineno, "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) bad_line(lineno, "empty section name");
            raw.sections[section];  // even an empty section must be known
            continue;
        }

        std::size_t eq = line.find('=');
        if (eq == std::string::npos) bad_line(lineno, "expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) bad_line(lineno, "empty key");
        if (value.empty()) bad_line(lineno, "empty value for key '" + key + "'");

        RawValue rv;
        rv.line = lineno;
        if (value.front() == '"') {
            if (value.size() < 2 || value.back() != '"') {
                bad_line(lineno, "unterminated string value");
            }
            rv.text = value.substr(1, value.size() - 2);
            rv.quoted = true;
        } else {
            rv.text = value;
        }

        auto& sec = raw.sections[section];
        if (sec.count(key)) bad_line(lineno, "duplicate key '" + key + "'");
        sec[key] = std::move(rv);
    }
    return raw;
}

// Pulls keys out of one section, complaining about leftovers at the end.
class SectionReader {
public:
    SectionReader(RawScenario& raw, std::string section)
        : section_(std::move(section)) {
        auto it = raw.sections.find(section_);
        if (it != raw.sections.end()) {
            entries_ = std::move(it->second);
            raw.sections.erase(it);
        }
    }

    std::optional<RawValue> take(const std::string& key) {
        auto it = entries_.find(key);
        if (it == entries_.end()) return std::nullopt;
        RawValue rv = std::move(it->second);
        entries_.erase(it);
        return rv;
    }

    double number(const std::string& key, double fallback) {
        auto rv = take(key);
        return rv ? parse_number(*rv, key) : fallback;
    }

    std::optional<double> number_opt(const std::string& key) {
        auto rv = take(key);
        if (!rv) return std::nullopt;
        return parse_number(*rv, key);
    }

    int integer(const std::string& key, int fallback) {
        auto rv = take(key);
        if (!rv) return fallback;
        double d = parse_number(*rv, key);
        int i = static_cast<int>(d);
        if (static_cast<double>(i) != d) {
            bad_line(rv->line, "key '" + key + "' must be an integer");
        }
        return i;
    }

    std::string word(const std::string& key, const std::string& fallback) {
        auto rv = take(key);
        return rv ? rv->text : fallback;
    }

    Expr expression(const std::string& key, bool required) {
        auto rv = take(key);
        if (!rv) {
            if (required) {
                throw ConfigError("scenario section [" + section_ +
                                  "] is missing required key '" + key + "'");
            }
            return Expr{};
        }
        if (!rv->quoted) {
            bad_line(rv->line, "expression '" + key + "' must be quoted");
        }
        try {
            return Expr::parse(rv->text);
        } catch (const SyntaxError& e) {
            bad_line(rv->line, "in expression '" + key + "': " + e.what());
        }
    }

    void finish() const {
        if (!entries_.empty()) {
            const auto& [key, rv] = *entries_.begin();
            bad_line(rv.line, "unknown key '" + key + "' in section [" + section_ + "]");
        }
    }

private:
    double parse_number(const RawValue& rv, const std::string& key) {
        double out = 0.0;
        const char* b = rv.text.data();
        const char* e = b + rv.text.size();
        auto [ptr, ec] = std::from_chars(b, e, out);
        if (ec != std::errc{} || ptr != e) {
            bad_line(rv.line, "key '" + key + "' is not a number: '" + rv.text + "'");
        }
        return out;
    }

    std::string section_;
    std::map<std::string, RawValue> entries_;
};

GridFunction curve_from_expr(const Scenario& sc, const Expr& e) {
    if (e.uses_v() || e.uses_w()) {
        throw ConfigError("bracket expressions may only use the variable s");
    }
    Grid g = sc.problem.make_grid(sc.n);
    return GridFunction::sample(g, [&](double s) { return e.eval(s, 0.0, 0.0); });
}

}  // namespace

GridFunction Scenario::sigma0_curve() const {
    if (sigma0.empty()) throw ConfigError("scenario has no sigma0 bracket expression");
    return curve_from_expr(*this, sigma0);
}

GridFunction Scenario::rho0_curve() const {
    if (rho0.empty()) throw ConfigError("scenario has no rho0 bracket expression");
    return curve_from_expr(*this, rho0);
}

GridFunction Scenario::initial_guess() const {
    return GridFunction::constant(problem.make_grid(n), problem.v0);
}

Scenario parse_scenario(const std::string& text) {
    RawScenario raw = tokenize(text);
    Scenario sc;

    SectionReader top(raw, "");
    sc.name = top.word("name", "");
    if (sc.name.empty()) throw ConfigError("scenario is missing the top-level 'name'");
    top.finish();

    SectionReader prob(raw, "problem");
    sc.problem.alpha = prob.number("alpha", 0.5);
    sc.problem.s0 = prob.number("s0", 0.0);
    sc.problem.length = prob.number("a", 1.0);
    sc.problem.v0 = prob.number("v0", 0.0);
    sc.problem.psi = prob.expression("psi", true);
    sc.problem.aleph1 = prob.expression("aleph1", true);
    sc.problem.aleph2 = prob.expression("aleph2", true);
    sc.problem.ell = prob.number("ell", 1.0);
    sc.problem.big_m = prob.number("M", 1.0);
    sc.problem.kappa = prob.number("kappa", 1.0);
    sc.problem.n1 = prob.number_opt("N1");
    sc.problem.n2 = prob.number_opt("N2");
    std::string policy = prob.word("domain_policy", "clamp");
    if (policy == "clamp") {
        sc.problem.policy = DomainPolicy::Clamp;
    } else if (policy == "strict") {
        sc.problem.policy = DomainPolicy::Strict;
    } else {
        throw ConfigError("domain_policy must be 'clamp' or 'strict', got '" + policy + "'");
    }
    sc.n = prob.integer("n", 256);
    prob.finish();
    if (sc.n < 2) throw ConfigError("grid n must be at least 2");

    SectionReader solver(raw, "solver");
    sc.solver.tol = solver.number("tol", sc.solver.tol);
    sc.solver.max_outer = solver.integer("max_outer", sc.solver.max_outer);
    sc.solver.max_inner = solver.integer("max_inner", sc.solver.max_inner);
    sc.solver.inner_tol = solver.number("inner_tol", sc.solver.inner_tol);
    sc.solver.relaxation = solver.number("relaxation", sc.solver.relaxation);
    solver.finish();

    SectionReader bracket(raw, "bracket");
    std::string kind = bracket.word("kind", "A");
    if (kind == "A") {
        sc.kind = MixedKind::A;
    } else if (kind == "B") {
        sc.kind = MixedKind::B;
    } else {
        throw ConfigError("bracket kind must be 'A' or 'B', got '" + kind + "'");
    }
    sc.sigma0 = bracket.expression("sigma0", false);
    sc.rho0 = bracket.expression("rho0", false);
    if (sc.sigma0.empty() != sc.rho0.empty()) {
        throw ConfigError("bracket needs both sigma0 and rho0 (or neither)");
    }
    sc.width_tol = bracket.number("width_tol", 1e-6);
    sc.max_steps = bracket.integer("max_steps", 30);
    bracket.finish();

    SectionReader hyp(raw, "hypotheses");
    sc.box.v_lo = hyp.number("v_lo", sc.problem.v0 - 1.0);
    sc.box.v_hi = hyp.number("v_hi", sc.problem.v0 + 1.0);
    sc.box.s_samples = hyp.integer("s_samples", 9);
    sc.box.v_samples = hyp.integer("v_samples", 17);
    sc.box.w_samples = hyp.integer("w_samples", 9);
    sc.box.tol_check = hyp.number("tol_check", 1e-9);
    hyp.finish();

    SectionReader out(raw, "output");
    sc.out_dir = out.word("dir", ".");
    out.finish();

    if (!raw.sections.empty()) {
        const auto& [name, entries] = *raw.sections.begin();
        int line = entries.empty() ? 0 : entries.begin()->second.line;
        bad_line(line, "unknown section [" + name + "]");
    }

    sc.problem.validate();
    sc.solver.validate();
    sc.box.validate();
    if (sc.width_tol <= 0.0) throw ConfigError("width_tol must be positive");
    if (sc.max_steps < 1) throw ConfigError("max_steps must be at least 1");
    if (sc.has_bracket()) {
        sc.sigma0_curve();  // validates variables and evaluability
        sc.rho0_curve();
    }
    return sc;
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open scenario file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

std::string serialize_scenario(const Scenario& sc) {
    std::ostringstream os;
    os << "name = " << sc.name << "\n\n";

    os << "[problem]\n";
    os << "alpha = " << format_double(sc.problem.alpha) << "\n";
    os << "s0 = " << format_double(sc.problem.s0) << "\n";
    os << "a = " << format_double(sc.problem.length) << "\n";
    os << "v0 = " << format_double(sc.problem.v0) << "\n";
    os << "psi = \"" << sc.problem.psi.str() << "\"\n";
    os << "aleph1 = \"" << sc.problem.aleph1.str() << "\"\n";
    os << "aleph2 = \"" << sc.problem.aleph2.str() << "\"\n";
    os << "ell = " << format_double(sc.problem.ell) << "\n";
    os << "M = " << format_double(sc.problem.big_m) << "\n";
    os << "kappa = " << format_double(sc.problem.kappa) << "\n";
    if (sc.problem.n1) os << "N1 = " << format_double(*sc.problem.n1) << "\n";
    if (sc.problem.n2) os << "N2 = " << format_double(*sc.problem.n2) << "\n";
    os << "domain_policy = "
       << (sc.problem.policy == DomainPolicy::Clamp ? "clamp" : "strict") << "\n";
    os << "n = " << sc.n << "\n\n";

    os << "[solver]\n";
    os << "tol = " << format_double(sc.solver.tol) << "\n";
    os << "max_outer = " << sc.solver.max_outer << "\n";
    os << "max_inner = " << sc.solver.max_inner << "\n";
    os << "inner_tol = " << format_double(sc.solver.inner_tol) << "\n";
    os << "relaxation = " << format_double(sc.solver.relaxation) << "\n\n";

    os << "[bracket]\n";
    os << "kind = " << (sc.kind == MixedKind::A ? "A" : "B") << "\n";
    if (sc.has_bracket()) {
        os << "sigma0 = \"" << sc.sigma0.str() << "\"\n";
        os << "rho0 = \"" << sc.rho0.str() << "\"\n";
    }
    os << "width_tol = " << format_double(sc.width_tol) << "\n";
    os << "max_steps = " << sc.max_steps << "\n\n";

    os << "[hypotheses]\n";
    os << "v_lo = " << format_double(sc.box.v_lo) << "\n";
    os << "v_hi = " << format_double(sc.box.v_hi) << "\n";
    os << "s_samples = " << sc.box.s_samples << "\n";
    os << "v_samples = " << sc.box.v_samples << "\n";
    os << "w_samples = " << sc.box.w_samples << "\n";
    os << "tol_check = " << format_double(sc.box.tol_check) << "\n\n";

    os << "[output]\n";
    os << "dir = " << sc.out_dir << "\n";
    return os.str();
}

std::string scenario_hash(const Scenario& sc) {
    std::string text = serialize_scenario(sc);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::array<char, 17> buf{};
    static const char* hex = "0123456789abcdef";
    for (int i = 15; i >= 0; --i) {
        buf[static_cast<std::size_t>(i)] = hex[h & 0xf];
        h >>= 4;
    }
    return std::string(buf.data(), 16);
}

}  // namespace fihde
