#include "bezred/bernstein.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace bezred {

ParamGrid::ParamGrid(std::vector<double> points) : points_(std::move(points)) {
    if (points_.size() < 2)
        throw std::invalid_argument("ParamGrid: need at least two sample parameters");
    double prev = -1.0;
    for (double t : points_) {
        if (!std::isfinite(t) || t < 0.0 || t > 1.0)
            throw std::invalid_argument("ParamGrid: parameters must be finite and in [0, 1]");
        if (t <= prev)
            throw std::invalid_argument("ParamGrid: parameters must be strictly increasing");
        prev = t;
    }
}

ParamGrid uniform_grid(int N) {
    if (N < 1) throw std::invalid_argument("uniform_grid: N must be >= 1");
    std::vector<double> pts(static_cast<std::size_t>(N) + 1);
    for (int k = 0; k <= N; ++k) pts[static_cast<std::size_t>(k)] = static_cast<double>(k) / N;
    pts.back() = 1.0;
    return ParamGrid(std::move(pts));
}

BezierCurve::BezierCurve(std::vector<Point2> points) : points_(std::move(points)) {
    if (points_.empty())
        throw std::invalid_argument("BezierCurve: need at least one control point");
    for (const Point2& p : points_)
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw std::invalid_argument("BezierCurve: control points must be finite");
}

std::vector<double> BezierCurve::coords_x() const {
    std::vector<double> xs(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i) xs[i] = points_[i].x;
    return xs;
}

std::vector<double> BezierCurve::coords_y() const {
    std::vector<double> ys(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i) ys[i] = points_[i].y;
    return ys;
}

std::int64_t binomial(int n, int i) {
    if (n < 0 || i < 0 || i > n || n > 64)
        throw std::invalid_argument("binomial: require 0 <= i <= n <= 64");
    // Pascal rows keep every intermediate value a true binomial coefficient,
    // so nothing exceeds C(64,32) and int64 never overflows.
    std::vector<std::int64_t> row(static_cast<std::size_t>(n) + 1, 0);
    row[0] = 1;
    for (int r = 1; r <= n; ++r)
        for (int k = r; k > 0; --k) row[static_cast<std::size_t>(k)] += row[static_cast<std::size_t>(k) - 1];
    return row[static_cast<std::size_t>(i)];
}

std::vector<SampledFunction> bernstein_values(int n, const ParamGrid& grid) {
    if (n < 0) throw std::invalid_argument("bernstein_values: degree must be >= 0");
    const std::size_t npts = grid.size();
    std::vector<SampledFunction> basis(static_cast<std::size_t>(n) + 1,
                                       SampledFunction(npts));
    std::vector<double> row(static_cast<std::size_t>(n) + 1);
    for (std::size_t k = 0; k < npts; ++k) {
        const double t = grid[k];
        row[0] = 1.0;
        for (int j = 1; j <= n; ++j) {
            double saved = 0.0;
            for (int r = 0; r < j; ++r) {
                const double tmp = row[static_cast<std::size_t>(r)];
                row[static_cast<std::size_t>(r)] = saved + (1.0 - t) * tmp;
                saved = t * tmp;
            }
            row[static_cast<std::size_t>(j)] = saved;
        }
        for (int i = 0; i <= n; ++i) basis[static_cast<std::size_t>(i)][k] = row[static_cast<std::size_t>(i)];
    }
    return basis;
}

double inner_product(const SampledFunction& f, const SampledFunction& g) {
    if (f.size() != g.size())
        throw std::invalid_argument("inner_product: length mismatch (" +
                                    std::to_string(f.size()) + " vs " + std::to_string(g.size()) + ")");
    return detail::dot(f.values, g.values);
}

Point2 eval_curve(const BezierCurve& curve, double t) {
    if (!(t >= 0.0 && t <= 1.0))
        throw std::invalid_argument("eval_curve: t must lie in [0, 1]");
    std::vector<Point2> work(curve.points().begin(), curve.points().end());
    for (std::size_t r = 1; r < work.size(); ++r) {
        for (std::size_t i = 0; i + r < work.size(); ++i) {
            work[i].x = (1.0 - t) * work[i].x + t * work[i + 1].x;
            work[i].y = (1.0 - t) * work[i].y + t * work[i + 1].y;
        }
    }
    return work[0];
}

namespace {

// sum_h coords[h] B_h^n(t) in O(n): start from B_0 = (1-t)^n and walk the
// basis with the ratio B_{h+1}/B_h = (n-h)/(h+1) * t/(1-t). All factors are
// positive, so nothing cancels. Callers mirror t > 1/2 so the base power
// never underflows.
double bernstein_form(std::span<const double> coords, double t) {
    const int n = static_cast<int>(coords.size()) - 1;
    if (t == 0.0) return coords[0];
    double b = 1.0;
    for (int j = 0; j < n; ++j) b *= 1.0 - t;
    const double ratio = t / (1.0 - t);
    double acc = 0.0;
    for (int h = 0; h <= n; ++h) {
        acc += coords[static_cast<std::size_t>(h)] * b;
        if (h < n) b *= ratio * static_cast<double>(n - h) / static_cast<double>(h + 1);
    }
    return acc;
}

} // namespace

SampledFunction sample_polynomial(std::span<const double> coords, const ParamGrid& grid) {
    if (coords.empty()) throw std::invalid_argument("sample_polynomial: empty coefficient list");
    std::vector<double> reversed(coords.rbegin(), coords.rend());
    SampledFunction out(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double t = grid[k];
        out[k] = t <= 0.5 ? bernstein_form(coords, t) : bernstein_form(reversed, 1.0 - t);
    }
    return out;
}

double forward_difference(std::span<const double> xs, int order) {
    if (order < 0 || static_cast<std::size_t>(order) >= xs.size())
        throw std::invalid_argument("forward_difference: order must be < length");
    std::vector<double> work(xs.begin(), xs.begin() + order + 1);
    for (int j = 0; j < order; ++j)
        for (int i = 0; i < order - j; ++i)
            work[static_cast<std::size_t>(i)] = work[static_cast<std::size_t>(i) + 1] - work[static_cast<std::size_t>(i)];
    return work[0];
}

namespace detail {

void axpy(double a, const SampledFunction& x, SampledFunction& y) {
    for (std::size_t k = 0; k < y.values.size(); ++k) y.values[k] += a * x.values[k];
}

double dot(std::span<const double> a, std::span<const double> b) {
    // extended-precision accumulation; repeated basis updates inherit the
    // accuracy of these sums
    long double acc = 0.0L;
    for (std::size_t k = 0; k < a.size(); ++k) acc += static_cast<long double>(a[k]) * b[k];
    return static_cast<double>(acc);
}

} // namespace detail

} // namespace bezred
