#include "bezred/reducer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bezred {

namespace {

constexpr int kMaxNormPoints = 500; // E_inf sample count - 1

BezierCurve assemble(std::vector<double> xs, std::vector<double> ys) {
    std::vector<Point2> pts(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) pts[i] = {xs[i], ys[i]};
    return BezierCurve(std::move(pts));
}

// The initial dual basis depends only on the grid and the free index set,
// so the x and y solves of one segment can share it.
SolveOptions with_shared_duals(SolveOptions options, const std::shared_ptr<const SampledBasis>& basis,
                               int m, const ContinuityOrders& orders) {
    if (options.backend != Backend::DualIncremental || options.shared_first_duals) return options;
    std::vector<int> first_free;
    for (int j = orders.alpha + 1; j <= m - orders.beta - 1; ++j) first_free.push_back(j);
    if (!first_free.empty())
        options.shared_first_duals = std::make_shared<const DualBasis>(build_dual(basis, first_free));
    return options;
}

// Projection of one coordinate onto the continuity-constrained sub-basis;
// the box-free reduction needs nothing else.
std::vector<double> traditional_component(std::span<const double> p_coord, int n,
                                          std::shared_ptr<const SampledBasis> basis,
                                          const ContinuityOrders& orders, Backend backend,
                                          const DualBasis* prebuilt) {
    const int m = static_cast<int>(basis->size()) - 1;
    const EndpointCoords fixed = fixed_endpoint_coords(p_coord, n, m, orders);
    SubproblemState state =
        first_subproblem(p_coord, n, std::move(basis), fixed, orders, backend, prebuilt);

    std::vector<double> result(static_cast<std::size_t>(m) + 1, 0.0);
    for (int i = 0; i <= orders.alpha; ++i) result[static_cast<std::size_t>(i)] = fixed.left[static_cast<std::size_t>(i)];
    for (int j = 0; j <= orders.beta; ++j)
        result[static_cast<std::size_t>(m - orders.beta + j)] = fixed.right[static_cast<std::size_t>(j)];
    for (std::size_t h = 0; h < state.free_order.size(); ++h)
        result[static_cast<std::size_t>(state.free_order[h])] = state.coeffs[h];
    return result;
}

} // namespace

void validate_request(const ReductionRequest& req) {
    const int n = req.curve.degree();
    if (req.m < 0 || req.m > n)
        throw std::invalid_argument("ReductionRequest: target degree must satisfy 0 <= m <= n");
    validate_orders(req.orders, n, req.m);
    if (req.N < 1 || req.N < req.m)
        throw std::invalid_argument("ReductionRequest: N must be >= max(1, m)");
    if (req.box) {
        validate_bounds(req.box->first);
        validate_bounds(req.box->second);
    }
}

ReductionReport reduce_boxed(const ReductionRequest& req, const SolveOptions& options) {
    validate_request(req);
    if (!req.box) throw std::invalid_argument("reduce_boxed: request has no box");

    const ParamGrid grid = uniform_grid(req.N);
    auto basis = std::make_shared<const SampledBasis>(SampledBasis::bernstein(req.m, grid));
    const int n = req.curve.degree();
    ReductionReport report{
        .result = BezierCurve({{0, 0}}),
        .error_ls = 0.0,
        .error_max = 0.0,
        .diag_x = {},
        .diag_y = {},
    };
    const SolveOptions shared = with_shared_duals(options, basis, req.m, req.orders);
    std::vector<double> xs = solve_component(req.curve.coords_x(), n, basis, req.orders,
                                             req.box->first, shared, &report.diag_x);
    std::vector<double> ys = solve_component(req.curve.coords_y(), n, basis, req.orders,
                                             req.box->second, shared, &report.diag_y);
    report.result = assemble(std::move(xs), std::move(ys));
    report.error_ls = error_E(req.curve, report.result, grid);
    report.error_max = error_Einf(req.curve, report.result);
    return report;
}

BezierCurve reduce_boxed_curve_only(const ReductionRequest& req, const SolveOptions& options) {
    validate_request(req);
    if (!req.box) throw std::invalid_argument("reduce_boxed_curve_only: request has no box");
    const ParamGrid grid = uniform_grid(req.N);
    auto basis = std::make_shared<const SampledBasis>(SampledBasis::bernstein(req.m, grid));
    const int n = req.curve.degree();
    const SolveOptions shared = with_shared_duals(options, basis, req.m, req.orders);
    std::vector<double> xs =
        solve_component(req.curve.coords_x(), n, basis, req.orders, req.box->first, shared);
    std::vector<double> ys =
        solve_component(req.curve.coords_y(), n, basis, req.orders, req.box->second, shared);
    return assemble(std::move(xs), std::move(ys));
}

ReductionReport reduce_traditional(const ReductionRequest& req, Backend backend) {
    validate_request(req);
    const ParamGrid grid = uniform_grid(req.N);
    auto basis = std::make_shared<const SampledBasis>(SampledBasis::bernstein(req.m, grid));
    const int n = req.curve.degree();
    const SolveOptions shared =
        with_shared_duals(SolveOptions{.backend = backend}, basis, req.m, req.orders);
    const DualBasis* prebuilt = shared.shared_first_duals.get();
    ReductionReport report{
        .result = assemble(
            traditional_component(req.curve.coords_x(), n, basis, req.orders, backend, prebuilt),
            traditional_component(req.curve.coords_y(), n, basis, req.orders, backend, prebuilt)),
        .error_ls = 0.0,
        .error_max = 0.0,
        .diag_x = {},
        .diag_y = {},
    };
    report.diag_x.iterations = 1;
    report.diag_y.iterations = 1;
    report.error_ls = error_E(req.curve, report.result, grid);
    report.error_max = error_Einf(req.curve, report.result);
    return report;
}

BoxPair default_box(const BezierCurve& curve) {
    Bounds bx{curve.point(0).x, curve.point(0).x};
    Bounds by{curve.point(0).y, curve.point(0).y};
    for (const Point2& p : curve.points()) {
        bx.lower = std::min(bx.lower, p.x);
        bx.upper = std::max(bx.upper, p.x);
        by.lower = std::min(by.lower, p.y);
        by.upper = std::max(by.upper, p.y);
    }
    return {bx, by};
}

double error_E(const BezierCurve& P, const BezierCurve& R, const ParamGrid& grid) {
    double acc = 0.0;
    for (double t : grid.points()) {
        const Point2 a = eval_curve(P, t);
        const Point2 b = eval_curve(R, t);
        const double dx = a.x - b.x, dy = a.y - b.y;
        acc += dx * dx + dy * dy;
    }
    return std::sqrt(acc);
}

double error_Einf(const BezierCurve& P, const BezierCurve& R) {
    double worst = 0.0;
    for (int k = 0; k <= kMaxNormPoints; ++k) {
        const double t = static_cast<double>(k) / kMaxNormPoints;
        const Point2 a = eval_curve(P, t);
        const Point2 b = eval_curve(R, t);
        worst = std::max(worst, std::hypot(a.x - b.x, a.y - b.y));
    }
    return worst;
}

} // namespace bezred
