#ifndef BEZRED_CONTINUITY_HPP
#define BEZRED_CONTINUITY_HPP

#include <span>
#include <vector>

#include "bezred/bernstein.hpp"

namespace bezred {

/// Orders of endpoint derivative matching: alpha at t=0, beta at t=1.
/// -1 means no constraint at that end. Validity against a target degree m
/// additionally requires alpha + beta < m - 1.
struct ContinuityOrders {
    int alpha = 0;
    int beta = 0;
};

/// Throws std::invalid_argument unless alpha, beta >= -1,
/// alpha + beta < m - 1, alpha < n and beta < n.
void validate_orders(const ContinuityOrders& orders, int n, int m);

struct EndpointCoords {
    std::vector<double> left;  // r_0 .. r_alpha (empty when alpha = -1)
    std::vector<double> right; // r_{m-beta} .. r_m (empty when beta = -1)
};

/// Coordinates of the degree-m control points forced by matching the
/// derivatives of the degree-n curve with coordinates `p` at the endpoints:
/// derivative matching gives
///   delta^i r_0 = [n(n-1)...(n-i+1) / (m(m-1)...(m-i+1))] * delta^i p_0,
/// then r_i is recovered from the differences. The right end uses the same
/// construction on the reversed coordinate sequence.
EndpointCoords fixed_endpoint_coords(std::span<const double> p, int n, int m,
                                     const ContinuityOrders& orders);

/// Max over i <= alpha, j <= beta of the Euclidean distance between the
/// endpoint derivatives of P and R, from the exact factorial-difference
/// derivative formulas.
double verify_continuity(const BezierCurve& P, const BezierCurve& R, const ContinuityOrders& orders);

/// Same defect, but each order divided by 1 + the magnitude of P's
/// derivative of that order.
double verify_continuity_relative(const BezierCurve& P, const BezierCurve& R,
                                  const ContinuityOrders& orders);

/// d^i/dt^i at t=0 of the curve with the given coordinate list:
/// n(n-1)...(n-i+1) * delta^i x_0.
double endpoint_derivative_start(std::span<const double> coords, int order);

/// d^j/dt^j at t=1: n(n-1)...(n-j+1) * delta^j x_{n-j}.
double endpoint_derivative_end(std::span<const double> coords, int order);

} // namespace bezred

#endif
