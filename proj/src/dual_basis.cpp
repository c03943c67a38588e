#include "bezred/dual_basis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "bezred/errors.hpp"

namespace bezred {

namespace {

// Relative floor for the expansion denominator v_new - sum_h v_h w_h.
// In exact arithmetic the denominator equals the squared distance of b_new
// from the current span, so a value at rounding level means dependence.
constexpr double kRankTol = 1e-12;

void check_index(const SampledBasis& basis, int j, const char* who) {
    if (j < 0 || static_cast<std::size_t>(j) >= basis.size())
        throw std::invalid_argument(std::string(who) + ": index out of range");
}

} // namespace

SampledBasis::SampledBasis(ParamGrid grid, std::vector<SampledFunction> functions)
    : grid_(std::move(grid)), functions_(std::move(functions)) {
    if (functions_.empty())
        throw std::invalid_argument("SampledBasis: need at least one function");
    for (const SampledFunction& f : functions_) {
        if (f.size() != grid_.size())
            throw std::invalid_argument("SampledBasis: function length does not match grid");
        for (double v : f.values)
            if (!std::isfinite(v)) throw std::invalid_argument("SampledBasis: non-finite sample");
    }
    const std::size_t s = functions_.size();
    gram_.resize(s * s);
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            const double g = inner_product(functions_[i], functions_[j]);
            gram_[i * s + j] = g;
            gram_[j * s + i] = g;
        }
}

SampledBasis SampledBasis::bernstein(int degree, ParamGrid grid) {
    std::vector<SampledFunction> fns = bernstein_values(degree, grid);
    return SampledBasis(std::move(grid), std::move(fns));
}

DualBasis::DualBasis(std::shared_ptr<const SampledBasis> basis) : basis_(std::move(basis)) {
    if (!basis_) throw std::invalid_argument("DualBasis: null basis");
}

int DualBasis::position_of(int j) const {
    auto it = std::find(indices_.begin(), indices_.end(), j);
    return it == indices_.end() ? -1 : static_cast<int>(it - indices_.begin());
}

ExpansionScratch DualBasis::expand_in_place(int new_index) {
    ExpansionScratch scratch;
    expand_in_place(new_index, scratch);
    return scratch;
}

void DualBasis::expand_in_place(int new_index, ExpansionScratch& scratch) {
    check_index(*basis_, new_index, "expand");
    if (position_of(new_index) >= 0)
        throw std::invalid_argument("expand: index already dualized");

    const SampledFunction& b_new = basis_->function(new_index);
    const std::size_t old_size = indices_.size();

    scratch.w.resize(old_size);
    scratch.v.resize(old_size + 1);
    scratch.c.resize(old_size + 1);

    for (std::size_t i = 0; i < old_size; ++i)
        scratch.w[i] = inner_product(duals_[i], b_new);
    for (std::size_t h = 0; h < old_size; ++h)
        scratch.v[h] = basis_->pair(new_index, indices_[h]);
    const double v_new = basis_->pair(new_index, new_index);
    scratch.v[old_size] = v_new;

    double denom = v_new;
    for (std::size_t h = 0; h < old_size; ++h) denom -= scratch.v[h] * scratch.w[h];
    if (!(denom > kRankTol * v_new))
        throw RankDeficiencyError("expand: function " + std::to_string(new_index) +
                                  " is numerically in the current span on this grid");

    double c_new = 1.0 / denom;
    std::vector<double>& c = scratch.c;
    c[old_size] = c_new;
    for (std::size_t h = 0; h < old_size; ++h) c[h] = -scratch.v[h] * c_new;

    SampledFunction d_new = std::move(spare_);
    d_new.values.assign(basis_->grid().size(), 0.0);
    detail::axpy(c_new, b_new, d_new);
    for (std::size_t h = 0; h < old_size; ++h) detail::axpy(c[h], duals_[h], d_new);

    // denom/v_new is the squared sine of the angle between b_new and the
    // current span; when it is small the combination above loses digits,
    // and the loss is scattered into every old dual scaled by w_i below.
    // One refinement sweep against the measured pairings restores them:
    //   d_new <- (1 + sum_h g_h w_h) d_new - sum_h g_h d_h,
    // with g_h = <B_h, d_new>, folded into c so the scratch still describes
    // the realized dual. Well-conditioned steps skip all of this.
    if (old_size > 0 && denom < 1e-3 * v_new) {
        std::vector<double> g(old_size);
        double crosstalk = 0.0;
        for (std::size_t h = 0; h < old_size; ++h) {
            g[h] = inner_product(basis_->function(indices_[h]), d_new);
            crosstalk += g[h] * scratch.w[h];
        }
        const double keep = 1.0 + crosstalk;
        for (double& value : d_new.values) value *= keep;
        for (double& value : c) value *= keep;
        for (std::size_t h = 0; h < old_size; ++h) {
            detail::axpy(-g[h], duals_[h], d_new);
            c[h] -= g[h];
        }
    }

    // Denominator cancellation also shows up as a pure scale error;
    // renormalize by the measured pairing.
    const double pairing = inner_product(b_new, d_new);
    if (pairing > 0.0 && std::isfinite(pairing)) {
        const double fix = 1.0 / pairing;
        for (double& value : d_new.values) value *= fix;
        for (double& value : c) value *= fix;
    }

    for (std::size_t i = 0; i < old_size; ++i) detail::axpy(-scratch.w[i], d_new, duals_[i]);

    indices_.push_back(new_index);
    duals_.push_back(std::move(d_new));
}

std::vector<double> DualBasis::contract_in_place(int remove_index) {
    std::vector<double> w;
    contract_in_place(remove_index, w);
    return w;
}

void DualBasis::contract_in_place(int remove_index, std::vector<double>& w) {
    const int pos = position_of(remove_index);
    if (pos < 0) throw std::invalid_argument("contract: index not dualized");
    if (indices_.size() < 2)
        throw std::invalid_argument("contract: need at least two dual functions");

    const std::size_t p = static_cast<std::size_t>(pos);
    SampledFunction d_q = std::move(duals_[p]);
    duals_.erase(duals_.begin() + pos);
    indices_.erase(indices_.begin() + pos);

    const double norm_q = inner_product(d_q, d_q);
    if (!(norm_q > 0.0) || !std::isfinite(norm_q))
        throw std::logic_error("contract: degenerate dual function, basis state is corrupt");

    w.resize(indices_.size());
    for (std::size_t i = 0; i < duals_.size(); ++i) {
        w[i] = -inner_product(duals_[i], d_q) / norm_q;
        detail::axpy(w[i], d_q, duals_[i]);
    }
    spare_ = std::move(d_q);
}

DualBasis dual_singleton(std::shared_ptr<const SampledBasis> basis, int index) {
    DualBasis d(std::move(basis));
    d.expand_in_place(index);
    return d;
}

std::pair<DualBasis, ExpansionScratch> expand(const DualBasis& d, int new_index) {
    DualBasis out = d;
    ExpansionScratch scratch = out.expand_in_place(new_index);
    return {std::move(out), std::move(scratch)};
}

std::pair<DualBasis, std::vector<double>> contract(const DualBasis& d, int remove_index) {
    DualBasis out = d;
    std::vector<double> w = out.contract_in_place(remove_index);
    return {std::move(out), std::move(w)};
}

DualBasis build_dual(std::shared_ptr<const SampledBasis> basis, std::span<const int> indices) {
    if (indices.empty()) throw std::invalid_argument("build_dual: empty index set");
    DualBasis d(std::move(basis));
    if (d.basis().grid().size() < indices.size())
        throw std::invalid_argument("build_dual: more functions than sample points");
    for (int j : indices) d.expand_in_place(j);
    return d;
}

std::vector<double> project(const DualBasis& d, const SampledFunction& g) {
    std::vector<double> e(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) e[i] = inner_product(g, d.dual(i));
    return e;
}

std::vector<double> update_coeffs_expand(std::span<const double> e, const ExpansionScratch& scratch,
                                         double g_dot_bnew) {
    if (e.size() != scratch.w.size())
        throw std::invalid_argument("update_coeffs_expand: coefficient/scratch size mismatch");
    const std::size_t n = e.size();
    double e_new = scratch.c[n] * g_dot_bnew;
    for (std::size_t h = 0; h < n; ++h) e_new += scratch.c[h] * e[h];

    std::vector<double> out(n + 1);
    for (std::size_t i = 0; i < n; ++i) out[i] = e[i] - scratch.w[i] * e_new;
    out[n] = e_new;
    return out;
}

std::vector<double> update_coeffs_contract(std::span<const double> e, std::span<const double> w,
                                           int removed_position) {
    if (e.empty() || removed_position < 0 || static_cast<std::size_t>(removed_position) >= e.size())
        throw std::invalid_argument("update_coeffs_contract: removed position out of range");
    if (w.size() + 1 != e.size())
        throw std::invalid_argument("update_coeffs_contract: w must cover the survivors");
    const double e_q = e[static_cast<std::size_t>(removed_position)];
    std::vector<double> out(w.size());
    std::size_t j = 0;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (i == static_cast<std::size_t>(removed_position)) continue;
        out[j] = e[i] + w[j] * e_q;
        ++j;
    }
    return out;
}

} // namespace bezred
