#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "fihde/errors.hpp"

namespace fihde {

// Uniform grid of n subintervals over [s0, s0 + length].
struct Grid {
    double s0 = 0.0;
    double length = 1.0;
    int n = 1;

    Grid() = default;
    Grid(double start, double len, int subintervals);

    double h() const { return length / n; }
    double node(int i) const { return s0 + (length * i) / n; }
    double end() const { return s0 + length; }
    bool contains(double s) const;

    bool operator==(const Grid& other) const = default;
};

enum class Interp {
    Linear,
    PchipMonotone,  // shape-preserving cubic; keeps monotone data monotone
};

// What to do when an inner argument of a self-composition leaves the interval.
enum class DomainPolicy {
    Strict,  // raise RangeError listing the offending nodes
    Clamp,   // project onto the interval and record the escape
};

// A real-valued function sampled at the nodes of a uniform grid, with an
// interpolation rule for evaluation between nodes. Immutable after
// construction; values are finite by construction.
class GridFunction {
public:
    GridFunction() : GridFunction(Grid{}, {0.0, 0.0}) {}  // zero on the unit grid
    GridFunction(Grid grid, std::vector<double> values,
                 Interp interp = Interp::PchipMonotone);

    static GridFunction constant(const Grid& grid, double value,
                                 Interp interp = Interp::PchipMonotone);
    static GridFunction sample(const Grid& grid,
                               const std::function<double(double)>& fn,
                               Interp interp = Interp::PchipMonotone);

    const Grid& grid() const { return grid_; }
    Interp interp() const { return interp_; }
    const std::vector<double>& values() const { return values_; }
    int size() const { return static_cast<int>(values_.size()); }
    double operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }

    // Interpolated value at s; exact at nodes. Throws DomainError when s lies
    // outside the interval (beyond round-off slack).
    double eval(double s) const;

    // Same as eval() but with the argument projected onto the interval first.
    double eval_clamped(double s) const;

    GridFunction with_values(std::vector<double> values) const;
    GridFunction with_interp(Interp interp) const;

private:
    Grid grid_;
    std::vector<double> values_;
    Interp interp_;
    std::vector<double> slopes_;  // Hermite slopes, filled for PchipMonotone

    double eval_on(double s) const;
};

// Free-function spelling of GridFunction::eval.
double interpolate(const GridFunction& f, double s);

double sup_norm(const std::vector<double>& v);
double sup_diff(const GridFunction& a, const GridFunction& b);

struct PointwiseViolation {
    int node;
    double magnitude;  // amount by which a exceeds b
};

// Checks a <= b + tol at every node; returns the worst violation if any.
// Grids must match.
std::optional<PointwiseViolation> pointwise_leq(const GridFunction& a,
                                                const GridFunction& b,
                                                double tol);

void require_same_grid(const GridFunction& a, const GridFunction& b,
                       const char* context);

}  // namespace fihde
