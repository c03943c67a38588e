#ifndef BEZRED_BVLS_HPP
#define BEZRED_BVLS_HPP

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "bezred/continuity.hpp"
#include "bezred/dual_basis.hpp"

namespace bezred {

/// Per-coordinate box l <= r_j <= u for the inner control points.
/// Infinite bounds are allowed and simply never bind.
struct Bounds {
    double lower = 0.0;
    double upper = 0.0;
};

void validate_bounds(const Bounds& b);

/// How each subproblem optimum is obtained.
enum class Backend {
    DualIncremental, // dual-basis expansion/contraction between iterations
    NormalEquations, // fresh Gram-matrix Cholesky solve every iteration
};

/// Disjoint index classes covering {0..m}: continuity-fixed, free, at the
/// lower bound, at the upper bound. Sets are kept sorted.
struct ActivePartition {
    std::vector<int> fixed;
    std::vector<int> free_set;
    std::vector<int> at_lower;
    std::vector<int> at_upper;

    /// Exact set algebra: pairwise disjoint and union = {0..m}.
    bool covers(int m) const;
};

/// State of the active-set iteration for one coordinate. phi is the current
/// approximation target over the free sub-basis (original curve minus the
/// fixed and at-bound contributions); coeffs holds the subproblem optimum
/// aligned with free_order. Under the dual backend, duals and coeffs are
/// maintained incrementally across transfers; under the normal-equations
/// backend coeffs are recomputed from scratch after every transfer.
struct SubproblemState {
    Backend backend = Backend::DualIncremental;
    std::shared_ptr<const SampledBasis> basis; // degree-m Bernstein values
    ActivePartition parts;
    std::vector<int> free_order; // free indices in dual insertion order
    SampledFunction phi;
    std::optional<DualBasis> duals; // engaged iff dual backend and free set nonempty
    std::vector<double> coeffs;    // aligned with free_order
    int iteration = 0;

    // reused across transfers; carries no state between calls
    ExpansionScratch workspace;
    std::vector<double> w_buffer;

    double coeff_for(int index) const;
    /// Distance between the maintained coefficients and a fresh projection
    /// (or fresh Gram solve); exercised by the consistency diagnostics.
    double coefficient_defect() const;
};

/// State for the initial free set {alpha+1 .. m-beta-1} with every bound
/// set empty: phi = sampled source curve coordinate minus the
/// continuity-fixed part, duals built from scratch (or copied from
/// `prebuilt` when a caller already holds the dual basis of that set),
/// coeffs projected.
SubproblemState first_subproblem(std::span<const double> p_coord, int n,
                                 std::shared_ptr<const SampledBasis> basis,
                                 const EndpointCoords& fixed, const ContinuityOrders& orders,
                                 Backend backend, const DualBasis* prebuilt = nullptr);

/// Moves q from a bound (resting value s) into the free set:
/// phi += s*B_q, duals expanded at q, coefficients updated without any
/// re-projection. The coefficient identity used:
///   <phi_new, d_h_old> = e_h + s*w_h,
///   <phi_new, B_q>     = <phi_old, B_q> + s*<B_q, B_q>.
void transfer_to_free(SubproblemState& state, int q, double s);

/// Moves q from the free set to a bound of value s: phi -= s*B_q, duals
/// contracted at q, and the survivors' coefficients get the closed-form
/// correction e_i += w_i * (e_q - s). to_lower picks the bound class q
/// joins in the partition.
void transfer_to_bound(SubproblemState& state, int q, double s, bool to_lower);

/// Gradient of the squared error with respect to a bound variable j:
/// g_j = -2 <phi - psi*, B_j>. A lower-bound variable violates optimality
/// when g_j < -tol, an upper-bound one when g_j > tol.
struct KktViolation {
    int index = -1;
    double gradient = 0.0;
    bool at_lower = false;
};

/// Scale-relative tolerance shared by the solver and the brute-force
/// reference, so the two can only disagree through real defects.
double kkt_tolerance(const SampledFunction& phi);

/// nullopt when the current iterate is optimal; otherwise the most-violating
/// bound index (largest |g_j|, ties broken by lowest index).
std::optional<KktViolation> kkt_check(const SubproblemState& state, const Bounds& bounds);

struct ComponentDiagnostics {
    int iterations = 0; // subproblem solves, the initial one included
    int to_free_transfers = 0;
    int to_bound_transfers = 0;
    double max_coeff_defect = 0.0; // only tracked when check_consistency is set
    bool pinned_box = false;       // degenerate l == u shortcut taken
    /// Squared error at each feasible subproblem optimum, in order; filled
    /// when record_error_history is set. Non-increasing by construction.
    std::vector<double> error_history;
};

struct SolveOptions {
    Backend backend = Backend::DualIncremental;
    /// After every transfer, compare maintained coefficients against a fresh
    /// projection and record the worst defect in the diagnostics.
    bool check_consistency = false;
    bool record_error_history = false;
    /// Dual basis of the initial free set, prebuilt by a caller that solves
    /// several coordinates of one curve: the basis depends only on the grid
    /// and the index set, never on the target. Ignored by the
    /// normal-equations backend; must match the initial free set exactly.
    std::shared_ptr<const DualBasis> shared_first_duals;
};

/// One coordinate of the box-constrained degree reduction: returns all m+1
/// coordinates. Continuity-fixed entries come from the endpoint formulas,
/// entries at a bound are exactly the bound value, free entries solve the
/// final subproblem. Requires grid size >= m + 1.
std::vector<double> solve_component(std::span<const double> p_coord, int n, int m,
                                    const ContinuityOrders& orders, const Bounds& bounds,
                                    const ParamGrid& grid, const SolveOptions& options = {},
                                    ComponentDiagnostics* diagnostics = nullptr);

/// Same solve against a prebuilt degree-m Bernstein table, so callers
/// solving several coordinates on one grid build it once.
std::vector<double> solve_component(std::span<const double> p_coord, int n,
                                    std::shared_ptr<const SampledBasis> basis,
                                    const ContinuityOrders& orders, const Bounds& bounds,
                                    const SolveOptions& options = {},
                                    ComponentDiagnostics* diagnostics = nullptr);

} // namespace bezred

#endif
