#include "fihde/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

namespace fihde {

namespace {

double boundary_slack(const Grid& g) {
    double scale = std::max({std::fabs(g.s0), std::fabs(g.end()), g.length});
    return 8.0 * std::numeric_limits<double>::epsilon() * std::max(scale, 1.0);
}

}  // namespace

Grid::Grid(double start, double len, int subintervals)
    : s0(start), length(len), n(subintervals) {
    if (!std::isfinite(start) || !std::isfinite(len)) {
        throw DataError("grid endpoints must be finite");
    }
    if (len <= 0.0) {
        throw DataError("grid length must be positive");
    }
    if (subintervals < 1) {
        throw DataError("grid needs at least one subinterval");
    }
}

bool Grid::contains(double s) const {
    double eps = boundary_slack(*this);
    return s >= s0 - eps && s <= end() + eps;
}

GridFunction::GridFunction(Grid grid, std::vector<double> values, Interp interp)
    : grid_(grid), values_(std::move(values)), interp_(interp) {
    if (values_.size() != static_cast<std::size_t>(grid_.n) + 1) {
        std::ostringstream os;
        os << "grid function needs " << grid_.n + 1 << " values, got "
           << values_.size();
        throw DataError(os.str());
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            std::ostringstream os;
            os << "non-finite sample at node " << i;
            throw DataError(os.str());
        }
    }
    if (interp_ == Interp::PchipMonotone && grid_.n >= 2) {
        // Fritsch-Carlson slopes on a uniform grid: harmonic mean of adjacent
        // secants, zero at local extrema, clamped one-sided ends.
        const int n = grid_.n;
        const double h = grid_.h();
        std::vector<double> delta(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            delta[static_cast<std::size_t>(i)] = (values_[i + 1] - values_[i]) / h;
        }
        slopes_.assign(values_.size(), 0.0);
        for (int i = 1; i < n; ++i) {
            double dl = delta[static_cast<std::size_t>(i - 1)];
            double dr = delta[static_cast<std::size_t>(i)];
            if (dl * dr > 0.0) {
                slopes_[static_cast<std::size_t>(i)] = 2.0 * dl * dr / (dl + dr);
            }
        }
        auto end_slope = [](double d_near, double d_far) {
            double d = (3.0 * d_near - d_far) / 2.0;
            if (d * d_near <= 0.0) return 0.0;
            if (d_near * d_far <= 0.0 && std::fabs(d) > 3.0 * std::fabs(d_near)) {
                return 3.0 * d_near;
            }
            return d;
        };
        slopes_.front() = end_slope(delta.front(), delta[1]);
        slopes_.back() = end_slope(delta.back(), delta[static_cast<std::size_t>(n - 2)]);
    }
}

GridFunction GridFunction::constant(const Grid& grid, double value, Interp interp) {
    return GridFunction(grid, std::vector<double>(static_cast<std::size_t>(grid.n) + 1, value),
                        interp);
}

GridFunction GridFunction::sample(const Grid& grid,
                                  const std::function<double(double)>& fn,
                                  Interp interp) {
    std::vector<double> vals(static_cast<std::size_t>(grid.n) + 1);
    for (int i = 0; i <= grid.n; ++i) {
        vals[static_cast<std::size_t>(i)] = fn(grid.node(i));
    }
    return GridFunction(grid, std::move(vals), interp);
}

double GridFunction::eval(double s) const {
    if (!grid_.contains(s)) {
        std::ostringstream os;
        os << "argument " << s << " outside [" << grid_.s0 << ", " << grid_.end() << "]";
        throw DomainError(os.str());
    }
    return eval_on(std::clamp(s, grid_.s0, grid_.end()));
}

double GridFunction::eval_clamped(double s) const {
    return eval_on(std::clamp(s, grid_.s0, grid_.end()));
}

double GridFunction::eval_on(double s) const {
    const double h = grid_.h();
    int i = static_cast<int>(std::floor((s - grid_.s0) / h));
    i = std::clamp(i, 0, grid_.n - 1);
    double t = (s - grid_.node(i)) / h;
    // Snap to the node value exactly when s sits on a node.
    if (t <= 0.0) return values_[static_cast<std::size_t>(i)];
    if (t >= 1.0) return values_[static_cast<std::size_t>(i) + 1];

    const double y0 = values_[static_cast<std::size_t>(i)];
    const double y1 = values_[static_cast<std::size_t>(i) + 1];
    if (interp_ == Interp::Linear || grid_.n < 2) {
        return y0 + t * (y1 - y0);
    }
    const double d0 = slopes_[static_cast<std::size_t>(i)];
    const double d1 = slopes_[static_cast<std::size_t>(i) + 1];
    const double t2 = t * t;
    const double t3 = t2 * t;
    return (2.0 * t3 - 3.0 * t2 + 1.0) * y0 + (t3 - 2.0 * t2 + t) * h * d0 +
           (-2.0 * t3 + 3.0 * t2) * y1 + (t3 - t2) * h * d1;
}

GridFunction GridFunction::with_values(std::vector<double> values) const {
    return GridFunction(grid_, std::move(values), interp_);
}

GridFunction GridFunction::with_interp(Interp interp) const {
    return GridFunction(grid_, values_, interp);
}

double interpolate(const GridFunction& f, double s) { return f.eval(s); }

double sup_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

double sup_diff(const GridFunction& a, const GridFunction& b) {
    require_same_grid(a, b, "sup_diff");
    double m = 0.0;
    for (int i = 0; i < a.size(); ++i) {
        m = std::max(m, std::fabs(a[i] - b[i]));
    }
    return m;
}

std::optional<PointwiseViolation> pointwise_leq(const GridFunction& a,
                                                const GridFunction& b,
                                                double tol) {
    require_same_grid(a, b, "pointwise_leq");
    std::optional<PointwiseViolation> worst;
    for (int i = 0; i < a.size(); ++i) {
        double excess = a[i] - b[i] - tol;
        if (excess > 0.0 && (!worst || excess > worst->magnitude)) {
            worst = PointwiseViolation{i, a[i] - b[i]};
        }
    }
    return worst;
}

void require_same_grid(const GridFunction& a, const GridFunction& b,
                       const char* context) {
    if (!(a.grid() == b.grid())) {
        throw DataError(std::string(context) + ": grid mismatch");
    }
}

}  // namespace fihde
