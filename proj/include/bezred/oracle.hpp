#ifndef BEZRED_ORACLE_HPP
#define BEZRED_ORACLE_HPP

#include <span>
#include <vector>

#include "bezred/bvls.hpp"
#include "bezred/continuity.hpp"
#include "bezred/dual_basis.hpp"

namespace bezred {

namespace oracle {

/// Dense symmetric system G e = rhs with G_ij = <b_i, b_j> over the given
/// index subset and rhs_i = <phi, b_i>. Solved by an unpivoted Cholesky
/// factorization; a non-positive pivot raises RankDeficiencyError.
/// Result aligns with the order of `free_indices`.
std::vector<double> normal_equations_solve(std::span<const int> free_indices,
                                           const SampledFunction& phi, const SampledBasis& basis);

/// Exhaustive reference solver for one coordinate of the box-constrained
/// reduction: every inner variable is assigned free / at-lower / at-upper,
/// each of the 3^k branches is solved on its free set, and the branch that
/// is strictly feasible with correctly signed bound gradients wins.
/// Refuses k > 8. Intended for verification, not production sizes.
std::vector<double> brute_force_box_solve(std::span<const double> p_coord, int n, int m,
                                          const ContinuityOrders& orders, const Bounds& bounds,
                                          const ParamGrid& grid);

} // namespace oracle

} // namespace bezred

#endif
