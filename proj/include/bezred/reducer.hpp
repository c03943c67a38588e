#ifndef BEZRED_REDUCER_HPP
#define BEZRED_REDUCER_HPP

#include <optional>
#include <utility>

#include "bezred/bvls.hpp"

namespace bezred {

/// Per-coordinate boxes: first is x, second is y.
using BoxPair = std::pair<Bounds, Bounds>;

struct ReductionRequest {
    BezierCurve curve;                // P_n
    int m = 0;                        // target degree
    ContinuityOrders orders;
    std::optional<BoxPair> box;       // required by reduce_boxed
    int N = 0;                        // uniform grid parameter, t_k = k/N
};

/// Throws std::invalid_argument unless m <= n, the continuity orders are
/// valid for (n, m), N >= m and N >= 1, and any box is well-formed.
/// m == n is a degenerate reduction kept for verification; the file loader
/// is stricter and demands m < n.
void validate_request(const ReductionRequest& req);

struct ReductionReport {
    BezierCurve result;  // R_m
    double error_ls = 0.0;   // sqrt(sum_k |P(t_k) - R(t_k)|^2) over the grid
    double error_max = 0.0;  // max |P(t) - R(t)| over {0, 1/500, ..., 1}
    ComponentDiagnostics diag_x;
    ComponentDiagnostics diag_y;
};

/// Box-constrained reduction: continuity-fixed endpoints, a componentwise
/// active-set solve for x and y, then both error metrics.
ReductionReport reduce_boxed(const ReductionRequest& req, const SolveOptions& options = {});

/// Reduction under the continuity constraints alone: one projection onto the
/// free sub-basis per coordinate, no active-set loop.
ReductionReport reduce_traditional(const ReductionRequest& req, Backend backend = Backend::DualIncremental);

/// As reduce_boxed, but skips the error metrics; used by the timing harness
/// so that both backends are compared on the solve alone.
BezierCurve reduce_boxed_curve_only(const ReductionRequest& req, const SolveOptions& options = {});

/// Componentwise min/max of the control points.
BoxPair default_box(const BezierCurve& curve);

/// sqrt(sum_k |P(t_k) - R(t_k)|^2), Euclidean norm in the plane; both curves
/// are evaluated afresh by de Casteljau.
double error_E(const BezierCurve& P, const BezierCurve& R, const ParamGrid& grid);

/// max_t |P(t) - R(t)| over the 501 equally spaced parameters {k/500}.
double error_Einf(const BezierCurve& P, const BezierCurve& R);

} // namespace bezred

#endif
