#ifndef BEZRED_DUAL_BASIS_HPP
#define BEZRED_DUAL_BASIS_HPP

#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "bezred/bernstein.hpp"

namespace bezred {

/// A family of candidate basis functions sampled on a common grid.
/// For degree reduction this is the full Bernstein basis of the target
/// degree, but the engine only sees sampled values. The pairwise inner
/// products are fixed by the family, so they are computed once here and
/// the incremental updates read them instead of re-deriving them.
class SampledBasis {
public:
    SampledBasis(ParamGrid grid, std::vector<SampledFunction> functions);

    /// All B_j^degree sampled on the grid.
    static SampledBasis bernstein(int degree, ParamGrid grid);

    const ParamGrid& grid() const { return grid_; }
    std::size_t size() const { return functions_.size(); }
    const SampledFunction& function(int j) const { return functions_[static_cast<std::size_t>(j)]; }

    /// <b_i, b_j> under the grid's discrete inner product.
    double pair(int i, int j) const { return gram_[static_cast<std::size_t>(i) * functions_.size() + static_cast<std::size_t>(j)]; }

private:
    ParamGrid grid_;
    std::vector<SampledFunction> functions_;
    std::vector<double> gram_;
};

/// Auxiliary quantities produced by one expansion step:
///   w_i = <d_i, b_new>           (one per pre-expansion dual)
///   v_j = <b_new, b_j>, v_new = <b_new, b_new>   (v_new stored last)
///   c_h = -v_h * c_new, c_new = 1 / (v_new - sum_h v_h w_h)   (c_new last)
/// They are exactly what the coefficient update of an already-projected
/// function needs, so the caller receives them instead of the basis
/// caching them.
struct ExpansionScratch {
    std::vector<double> w;
    std::vector<double> v;
    std::vector<double> c;
};

/// Dual basis for a subset F of the functions of a SampledBasis under the
/// discrete inner product: <b_j, d_i> = delta_ij for i, j in F, and every
/// d_i lies in span{b_j : j in F}.
///
/// Duals are stored as sampled value vectors, which makes every inner
/// product an O(N) dot and one expansion or contraction O(|F|*N).
class DualBasis {
public:
    explicit DualBasis(std::shared_ptr<const SampledBasis> basis);

    const SampledBasis& basis() const { return *basis_; }
    const std::shared_ptr<const SampledBasis>& basis_ptr() const { return basis_; }

    std::size_t size() const { return indices_.size(); }
    bool empty() const { return indices_.empty(); }

    /// Dualized indices in insertion order. Positions in this list align
    /// with duals() and with every coefficient vector the engine produces.
    std::span<const int> indices() const { return indices_; }
    const SampledFunction& dual(std::size_t position) const { return duals_[position]; }
    std::span<const SampledFunction> duals() const { return duals_; }

    /// Position of index j in indices(), or -1.
    int position_of(int j) const;

    /// In-place forms of the free functions below. The free functions are
    /// the public surface; these exist so an inner loop can avoid copies.
    /// The buffer-taking overloads additionally reuse the caller's storage.
    ExpansionScratch expand_in_place(int new_index);
    std::vector<double> contract_in_place(int remove_index);
    void expand_in_place(int new_index, ExpansionScratch& scratch);
    void contract_in_place(int remove_index, std::vector<double>& w);

private:
    std::shared_ptr<const SampledBasis> basis_;
    std::vector<int> indices_;
    std::vector<SampledFunction> duals_;
    SampledFunction spare_; // recycled storage for the next new dual
};

/// D_0 = { b / <b,b> } for the single function at `index`.
/// Throws RankDeficiencyError when <b,b> is not safely positive.
DualBasis dual_singleton(std::shared_ptr<const SampledBasis> basis, int index);

/// Dual basis for F u {new_index} from the one for F, plus the scratch
/// quantities of the step. The new dual is
///   d_new = sum_h c_h d_h + c_new b_new,
/// and every old dual becomes d_i - w_i d_new. The distinguished element
/// may be any index outside F; duality is pairwise, so the position it is
/// appended at carries no meaning.
std::pair<DualBasis, ExpansionScratch> expand(const DualBasis& d, int new_index);

/// Dual basis for F \ {remove_index} from the one for F, without any
/// linear solve: with d_q the dual being dropped,
///   w_i = -<d_i, d_q> / <d_q, d_q>,  d_i <- d_i + w_i d_q.
/// Returns w aligned with the surviving positions.
std::pair<DualBasis, std::vector<double>> contract(const DualBasis& d, int remove_index);

/// Builds the dual basis for an arbitrary index set by repeated expansion;
/// only the final basis is retained.
DualBasis build_dual(std::shared_ptr<const SampledBasis> basis, std::span<const int> indices);

/// Best-approximation coefficients e_i = <g, d_i>, one per index position.
/// sum_i e_i b_i is the least-squares-closest element of the spanned
/// subspace to g.
std::vector<double> project(const DualBasis& d, const SampledFunction& g);

/// Coefficients after an expansion, from the pre-expansion coefficients and
/// the step's scratch: e_new = sum_h c_h e_h + c_new <g, b_new>, then
/// e_i <- e_i - w_i e_new.
std::vector<double> update_coeffs_expand(std::span<const double> e, const ExpansionScratch& scratch,
                                         double g_dot_bnew);

/// Coefficients after a contraction: e_i <- e_i + w_i e_q with the removed
/// entry dropped. `w` comes from contract() and aligns with the survivors.
std::vector<double> update_coeffs_contract(std::span<const double> e, std::span<const double> w,
                                           int removed_position);

} // namespace bezred

#endif
