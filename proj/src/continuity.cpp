#include "bezred/continuity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bezred {

namespace {

// Falling factorial n(n-1)...(n-i+1) as a running product. Empty product
// for i = 0. Never forms a full factorial, so it stays in range for n <= 64.
double falling_factorial(int n, int i) {
    double acc = 1.0;
    for (int j = 0; j < i; ++j) acc *= static_cast<double>(n - j);
    return acc;
}

// r_0..r_order matching the start derivatives of the degree-n sequence p.
std::vector<double> match_start(std::span<const double> p, int n, int m, int order) {
    std::vector<double> delta_r(static_cast<std::size_t>(order) + 1);
    for (int i = 0; i <= order; ++i) {
        // ratio of falling factorials, accumulated factor by factor
        double ratio = 1.0;
        for (int j = 0; j < i; ++j) ratio *= static_cast<double>(n - j) / static_cast<double>(m - j);
        delta_r[static_cast<std::size_t>(i)] = ratio * forward_difference(p, i);
    }
    std::vector<double> r(static_cast<std::size_t>(order) + 1);
    for (int i = 0; i <= order; ++i) {
        double acc = 0.0;
        for (int j = 0; j <= i; ++j)
            acc += static_cast<double>(binomial(i, j)) * delta_r[static_cast<std::size_t>(j)];
        r[static_cast<std::size_t>(i)] = acc;
    }
    return r;
}

} // namespace

void validate_orders(const ContinuityOrders& orders, int n, int m) {
    if (orders.alpha < -1 || orders.beta < -1)
        throw std::invalid_argument("continuity orders must be >= -1");
    if (orders.alpha + orders.beta >= m - 1)
        throw std::invalid_argument("continuity orders too high: alpha + beta must be < m - 1");
    if (orders.alpha >= n || orders.beta >= n)
        throw std::invalid_argument("continuity orders must be below the source degree");
}

EndpointCoords fixed_endpoint_coords(std::span<const double> p, int n, int m,
                                     const ContinuityOrders& orders) {
    if (static_cast<std::size_t>(n) + 1 != p.size())
        throw std::invalid_argument("fixed_endpoint_coords: coordinate count must be n + 1");
    validate_orders(orders, n, m);

    EndpointCoords out;
    if (orders.alpha >= 0) out.left = match_start(p, n, m, orders.alpha);
    if (orders.beta >= 0) {
        // C^beta at t=1 of (P, R) is C^beta at t=0 of the reversed curves;
        // the (-1)^j factors from the reparametrization cancel on both sides.
        std::vector<double> rev(p.rbegin(), p.rend());
        std::vector<double> tail = match_start(rev, n, m, orders.beta);
        out.right.assign(tail.rbegin(), tail.rend());
    }
    return out;
}

double endpoint_derivative_start(std::span<const double> coords, int order) {
    const int n = static_cast<int>(coords.size()) - 1;
    return falling_factorial(n, order) * forward_difference(coords, order);
}

double endpoint_derivative_end(std::span<const double> coords, int order) {
    const int n = static_cast<int>(coords.size()) - 1;
    std::span<const double> tail = coords.subspan(coords.size() - 1 - static_cast<std::size_t>(order));
    return falling_factorial(n, order) * forward_difference(tail, order);
}

namespace {

double continuity_defect(const BezierCurve& P, const BezierCurve& R, const ContinuityOrders& orders,
                         bool relative) {
    const std::vector<double> px = P.coords_x(), py = P.coords_y();
    const std::vector<double> rx = R.coords_x(), ry = R.coords_y();
    double worst = 0.0;
    auto account = [&](double dpx, double dpy, double drx, double dry) {
        const double defect = std::hypot(dpx - drx, dpy - dry);
        const double scale = relative ? 1.0 + std::hypot(dpx, dpy) : 1.0;
        worst = std::max(worst, defect / scale);
    };
    for (int i = 0; i <= orders.alpha; ++i)
        account(endpoint_derivative_start(px, i), endpoint_derivative_start(py, i),
                endpoint_derivative_start(rx, i), endpoint_derivative_start(ry, i));
    for (int j = 0; j <= orders.beta; ++j)
        account(endpoint_derivative_end(px, j), endpoint_derivative_end(py, j),
                endpoint_derivative_end(rx, j), endpoint_derivative_end(ry, j));
    return worst;
}

} // namespace

double verify_continuity(const BezierCurve& P, const BezierCurve& R, const ContinuityOrders& orders) {
    return continuity_defect(P, R, orders, false);
}

double verify_continuity_relative(const BezierCurve& P, const BezierCurve& R,
                                  const ContinuityOrders& orders) {
    return continuity_defect(P, R, orders, true);
}

} // namespace bezred
