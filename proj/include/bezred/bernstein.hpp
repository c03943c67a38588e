#ifndef BEZRED_BERNSTEIN_HPP
#define BEZRED_BERNSTEIN_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace bezred {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

/// Strictly increasing sample parameters t_0 < t_1 < ... < t_N in [0, 1].
/// Validated once at construction; downstream code relies on the invariants.
class ParamGrid {
public:
    explicit ParamGrid(std::vector<double> points);

    std::size_t size() const { return points_.size(); }
    double operator[](std::size_t k) const { return points_[k]; }
    std::span<const double> points() const { return points_; }

    bool operator==(const ParamGrid&) const = default;

private:
    std::vector<double> points_;
};

/// t_k = k/N for k = 0..N.
ParamGrid uniform_grid(int N);

/// A function represented by its values at the points of an associated
/// ParamGrid. The association is by length; operations that combine two
/// sampled functions check lengths, not grid identity.
struct SampledFunction {
    std::vector<double> values;

    SampledFunction() = default;
    explicit SampledFunction(std::vector<double> v) : values(std::move(v)) {}
    explicit SampledFunction(std::size_t n, double fill = 0.0) : values(n, fill) {}

    std::size_t size() const { return values.size(); }
    double operator[](std::size_t k) const { return values[k]; }
    double& operator[](std::size_t k) { return values[k]; }
};

/// Planar Bezier curve: degree n plus n+1 control points.
class BezierCurve {
public:
    explicit BezierCurve(std::vector<Point2> points);

    int degree() const { return static_cast<int>(points_.size()) - 1; }
    std::span<const Point2> points() const { return points_; }
    const Point2& point(std::size_t i) const { return points_[i]; }

    std::vector<double> coords_x() const;
    std::vector<double> coords_y() const;

private:
    std::vector<Point2> points_;
};

/// Exact binomial coefficient, 0 <= i <= n <= 64.
std::int64_t binomial(int n, int i);

/// All Bernstein polynomials of degree n sampled on the grid: entry i holds
/// B_i^n(t_k) for every k. Uses the degree-raising recurrence, which stays
/// stable for large n where the closed binomial formula would not.
std::vector<SampledFunction> bernstein_values(int n, const ParamGrid& grid);

/// <f,g> = sum_k f(t_k) g(t_k).
double inner_product(const SampledFunction& f, const SampledFunction& g);

/// de Casteljau evaluation; t must lie in [0, 1].
Point2 eval_curve(const BezierCurve& curve, double t);

/// Forward difference of the leading entries: order 0 returns xs[0],
/// order j applies x_{i+1} - x_i recursively j times.
double forward_difference(std::span<const double> xs, int order);

/// Values at the grid points of the polynomial with the given Bernstein
/// coefficients, by de Casteljau at each point.
SampledFunction sample_polynomial(std::span<const double> coords, const ParamGrid& grid);

namespace detail {
// In-place vector helpers shared by the dual engine and the solver.
void axpy(double a, const SampledFunction& x, SampledFunction& y); // y += a*x
double dot(std::span<const double> a, std::span<const double> b);
} // namespace detail

} // namespace bezred

#endif
