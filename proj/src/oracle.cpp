#include "fihde/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fihde/fraccalc.hpp"

namespace fihde {

void OracleConfig::validate() const {
    if (dense_n < 2) throw ConfigError("oracle dense_n must be at least 2");
    if (!(dense_tol > 0.0)) throw ConfigError("oracle dense_tol must be positive");
    if (max_outer < 1) throw ConfigError("oracle max_outer must be at least 1");
    if (stride < 1) throw ConfigError("oracle stride must be at least 1");
}

namespace {

// Shared power tables: u = k h appears for every (node, panel) pair, so the
// two moment exponents are tabulated once per call.
struct PowerTables {
    std::vector<double> pa;   // (k h)^alpha
    std::vector<double> pa1;  // (k h)^(alpha+1)
};

PowerTables build_tables(const Grid& g, double alpha) {
    PowerTables t;
    t.pa.resize(static_cast<std::size_t>(g.n) + 1);
    t.pa1.resize(static_cast<std::size_t>(g.n) + 1);
    const double h = g.h();
    for (int k = 0; k <= g.n; ++k) {
        double u = k * h;
        t.pa[static_cast<std::size_t>(k)] = std::pow(u, alpha);
        t.pa1[static_cast<std::size_t>(k)] = std::pow(u, alpha + 1.0);
    }
    return t;
}

// Integral over panel [s_j, s_{j+1}] of (s_i - beta)^(alpha-1) times the
// linear interpolant of f, via the substitution u = s_i - beta:
//
//   (1/h) * ( f_j [M1 - u0 M0] + f_{j+1} [u1 M0 - M1] )
//
// with u0 = (i-j-1) h, u1 = (i-j) h, M0 = (u1^a - u0^a)/a and
// M1 = (u1^(a+1) - u0^(a+1))/(a+1).
std::vector<double> product_integral(const std::vector<double>& f, double alpha,
                                     const Grid& g, const PowerTables& t) {
    const int n = g.n;
    const double h = g.h();
    const double inv_gamma = 1.0 / gamma_fn(alpha);
    std::vector<double> out(static_cast<std::size_t>(n) + 1, 0.0);
    for (int i = 1; i <= n; ++i) {
        double acc = 0.0;
        for (int j = 0; j < i; ++j) {
            int k1 = i - j;      // u1 = k1 h
            int k0 = i - j - 1;  // u0 = k0 h
            double u0 = k0 * h;
            double u1 = k1 * h;
            double m0 = (t.pa[static_cast<std::size_t>(k1)] -
                         t.pa[static_cast<std::size_t>(k0)]) /
                        alpha;
            double m1 = (t.pa1[static_cast<std::size_t>(k1)] -
                         t.pa1[static_cast<std::size_t>(k0)]) /
                        (alpha + 1.0);
            acc += (f[static_cast<std::size_t>(j)] * (m1 - u0 * m0) +
                    f[static_cast<std::size_t>(j) + 1] * (u1 * m0 - m1)) /
                   h;
        }
        out[static_cast<std::size_t>(i)] = acc * inv_gamma;
    }
    return out;
}

double linear_at(const Grid& g, const std::vector<double>& v, double s) {
    double clamped = std::clamp(s, g.s0, g.end());
    double pos = (clamped - g.s0) / g.h();
    int i = std::clamp(static_cast<int>(std::floor(pos)), 0, g.n - 1);
    double tfrac = pos - i;
    return v[static_cast<std::size_t>(i)] +
           tfrac * (v[static_cast<std::size_t>(i) + 1] - v[static_cast<std::size_t>(i)]);
}

}  // namespace

std::vector<double> oracle_rl_integral_values(const std::vector<double>& f,
                                              double alpha, const Grid& dense) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw DomainError("oracle_rl_integral order must lie in (0, 1]");
    }
    if (f.size() != static_cast<std::size_t>(dense.n) + 1) {
        throw DataError("oracle_rl_integral: sample count does not match grid");
    }
    PowerTables t = build_tables(dense, alpha);
    return product_integral(f, alpha, dense, t);
}

std::vector<double> oracle_rl_integral(const std::function<double(double)>& f,
                                       double alpha, const Grid& dense) {
    std::vector<double> samples(static_cast<std::size_t>(dense.n) + 1);
    for (int i = 0; i <= dense.n; ++i) {
        samples[static_cast<std::size_t>(i)] = f(dense.node(i));
    }
    return oracle_rl_integral_values(samples, alpha, dense);
}

OracleSolveResult oracle_solve(const ProblemSpec& p, const OracleConfig& cfg) {
    p.validate();
    cfg.validate();
    Grid g(p.s0, p.length, cfg.dense_n);
    PowerTables tables = build_tables(g, p.alpha);

    std::vector<double> v(static_cast<std::size_t>(g.n) + 1, p.v0);
    std::vector<double> load(v.size());
    OracleSolveResult result;
    result.grid = g;
    double diff = std::numeric_limits<double>::infinity();

    for (int k = 0; k < cfg.max_outer; ++k) {
        for (int i = 0; i <= g.n; ++i) {
            double s = g.node(i);
            double w = linear_at(g, v, v[static_cast<std::size_t>(i)]);
            load[static_cast<std::size_t>(i)] =
                p.aleph_at(s, v[static_cast<std::size_t>(i)], w);
        }
        std::vector<double> forcing = product_integral(load, p.alpha, g, tables);
        double c = p.v0 - p.psi_at(p.s0, p.v0, linear_at(g, v, p.v0));

        diff = 0.0;
        std::vector<double> next(v.size());
        for (int i = 0; i <= g.n; ++i) {
            double s = g.node(i);
            double w = linear_at(g, v, v[static_cast<std::size_t>(i)]);
            next[static_cast<std::size_t>(i)] =
                c + p.psi_at(s, v[static_cast<std::size_t>(i)], w) +
                forcing[static_cast<std::size_t>(i)];
            diff = std::max(diff, std::fabs(next[static_cast<std::size_t>(i)] -
                                            v[static_cast<std::size_t>(i)]));
        }
        v = std::move(next);
        result.iterations = k + 1;
        if (diff <= cfg.dense_tol) {
            result.values = std::move(v);
            result.final_diff = diff;
            return result;
        }
    }

    std::ostringstream os;
    os << "golden generation refused: dense solve stalled at step size " << diff
       << " after " << cfg.max_outer << " sweeps";
    throw SolverError(os.str(), diff);
}

double oracle_scalar_fixed_point(const std::function<double(double)>& g, double lo,
                                 double hi) {
    auto f = [&](double x) { return x - g(x); };
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (flo * fhi > 0.0) {
        throw DomainError("oracle_scalar_fixed_point: no sign change on bracket");
    }
    for (int i = 0; i < 200 && hi - lo > 1e-12; ++i) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if (fm == 0.0) return mid;
        if (flo * fm < 0.0) {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace fihde
