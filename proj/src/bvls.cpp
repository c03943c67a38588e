#include "bezred/bvls.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "bezred/errors.hpp"
#include "bezred/oracle.hpp"

namespace bezred {

namespace {

void insert_sorted(std::vector<int>& set, int v) {
    set.insert(std::lower_bound(set.begin(), set.end(), v), v);
}

bool erase_value(std::vector<int>& set, int v) {
    auto it = std::find(set.begin(), set.end(), v);
    if (it == set.end()) return false;
    set.erase(it);
    return true;
}

// psi* = sum_h e_h B_{F[h]}; returns phi - psi*.
SampledFunction subproblem_residual(const SubproblemState& state) {
    SampledFunction residual = state.phi;
    for (std::size_t h = 0; h < state.free_order.size(); ++h)
        detail::axpy(-state.coeffs[h], state.basis->function(state.free_order[h]), residual);
    return residual;
}

std::vector<double> refresh_coeffs(const SubproblemState& state) {
    if (state.backend == Backend::DualIncremental) return project(*state.duals, state.phi);
    return oracle::normal_equations_solve(state.free_order, state.phi, *state.basis);
}

} // namespace

void validate_bounds(const Bounds& b) {
    if (std::isnan(b.lower) || std::isnan(b.upper) || !(b.lower <= b.upper))
        throw std::invalid_argument("Bounds: require lower <= upper");
}

bool ActivePartition::covers(int m) const {
    std::vector<int> all;
    all.reserve(static_cast<std::size_t>(m) + 1);
    for (const std::vector<int>* set : {&fixed, &free_set, &at_lower, &at_upper})
        all.insert(all.end(), set->begin(), set->end());
    if (all.size() != static_cast<std::size_t>(m) + 1) return false;
    std::sort(all.begin(), all.end());
    for (int j = 0; j <= m; ++j)
        if (all[static_cast<std::size_t>(j)] != j) return false;
    return true;
}

double SubproblemState::coeff_for(int index) const {
    auto it = std::find(free_order.begin(), free_order.end(), index);
    if (it == free_order.end()) throw std::invalid_argument("coeff_for: index not free");
    return coeffs[static_cast<std::size_t>(it - free_order.begin())];
}

double SubproblemState::coefficient_defect() const {
    const std::vector<double> fresh = refresh_coeffs(*this);
    double worst = 0.0;
    for (std::size_t h = 0; h < coeffs.size(); ++h)
        worst = std::max(worst, std::abs(coeffs[h] - fresh[h]));
    return worst;
}

SubproblemState first_subproblem(std::span<const double> p_coord, int n,
                                 std::shared_ptr<const SampledBasis> basis,
                                 const EndpointCoords& fixed, const ContinuityOrders& orders,
                                 Backend backend, const DualBasis* prebuilt) {
    if (p_coord.size() != static_cast<std::size_t>(n) + 1)
        throw std::invalid_argument("first_subproblem: coordinate count must be n + 1");
    const int m = static_cast<int>(basis->size()) - 1;
    validate_orders(orders, n, m);

    SubproblemState state;
    state.backend = backend;
    state.basis = std::move(basis);

    state.phi = sample_polynomial(p_coord, state.basis->grid());

    for (int i = 0; i <= orders.alpha; ++i) {
        state.parts.fixed.push_back(i);
        detail::axpy(-fixed.left[static_cast<std::size_t>(i)], state.basis->function(i), state.phi);
    }
    for (int j = 0; j <= orders.beta; ++j) {
        state.parts.fixed.push_back(m - orders.beta + j);
        detail::axpy(-fixed.right[static_cast<std::size_t>(j)], state.basis->function(m - orders.beta + j),
                     state.phi);
    }
    std::sort(state.parts.fixed.begin(), state.parts.fixed.end());

    for (int j = orders.alpha + 1; j <= m - orders.beta - 1; ++j) {
        state.parts.free_set.push_back(j);
        state.free_order.push_back(j);
    }

    if (state.backend == Backend::DualIncremental) {
        if (prebuilt) {
            if (prebuilt->basis_ptr() != state.basis ||
                !std::is_permutation(prebuilt->indices().begin(), prebuilt->indices().end(),
                                     state.free_order.begin(), state.free_order.end()))
                throw std::invalid_argument("first_subproblem: prebuilt duals do not match the free set");
            state.duals = *prebuilt;
            state.free_order.assign(prebuilt->indices().begin(), prebuilt->indices().end());
        } else {
            state.duals = build_dual(state.basis, state.free_order);
        }
        state.coeffs = project(*state.duals, state.phi);
    } else {
        state.coeffs = oracle::normal_equations_solve(state.free_order, state.phi, *state.basis);
    }
    state.iteration = 1;
    return state;
}

void transfer_to_free(SubproblemState& state, int q, double s) {
    if (!erase_value(state.parts.at_lower, q) && !erase_value(state.parts.at_upper, q))
        throw std::invalid_argument("transfer_to_free: index is not at a bound");
    insert_sorted(state.parts.free_set, q);

    const SampledFunction& b_q = state.basis->function(q);
    if (state.backend == Backend::DualIncremental) {
        const double phi_dot_bq = inner_product(state.phi, b_q);
        if (!state.duals) state.duals = DualBasis(state.basis);
        state.duals->expand_in_place(q, state.workspace);
        const ExpansionScratch& ws = state.workspace;

        // Coefficients of the shifted target against the old duals, then the
        // standard expansion update with <phi + s*B_q, B_q>.
        const std::size_t old_size = state.coeffs.size();
        double e_new = ws.c[old_size] * (phi_dot_bq + s * ws.v[old_size]);
        for (std::size_t h = 0; h < old_size; ++h) {
            state.coeffs[h] += s * ws.w[h];
            e_new += ws.c[h] * state.coeffs[h];
        }
        for (std::size_t h = 0; h < old_size; ++h) state.coeffs[h] -= ws.w[h] * e_new;
        state.coeffs.push_back(e_new);
        detail::axpy(s, b_q, state.phi);
    } else {
        detail::axpy(s, b_q, state.phi);
        state.free_order.push_back(q);
        state.coeffs = oracle::normal_equations_solve(state.free_order, state.phi, *state.basis);
        ++state.iteration;
        return;
    }
    state.free_order.push_back(q);
    ++state.iteration;
}

void transfer_to_bound(SubproblemState& state, int q, double s, bool to_lower) {
    if (!erase_value(state.parts.free_set, q))
        throw std::invalid_argument("transfer_to_bound: index is not free");
    insert_sorted(to_lower ? state.parts.at_lower : state.parts.at_upper, q);

    auto it = std::find(state.free_order.begin(), state.free_order.end(), q);
    const std::size_t pos = static_cast<std::size_t>(it - state.free_order.begin());
    state.free_order.erase(it);

    const SampledFunction& b_q = state.basis->function(q);
    if (state.backend == Backend::DualIncremental) {
        const double e_q = state.coeffs[pos];
        if (state.duals->size() == 1) {
            state.duals = DualBasis(state.basis);
            state.coeffs.clear();
        } else {
            state.duals->contract_in_place(q, state.w_buffer);
            // Contraction and the phi shift in one closed form:
            // e_i <- e_i + w_i (e_q - s).
            std::size_t j = 0;
            for (std::size_t i = 0; i < state.coeffs.size(); ++i) {
                if (i == pos) continue;
                state.coeffs[j] = state.coeffs[i] + state.w_buffer[j] * (e_q - s);
                ++j;
            }
            state.coeffs.resize(j);
        }
        detail::axpy(-s, b_q, state.phi);
    } else {
        detail::axpy(-s, b_q, state.phi);
        state.coeffs = oracle::normal_equations_solve(state.free_order, state.phi, *state.basis);
    }
    ++state.iteration;
}

double kkt_tolerance(const SampledFunction& phi) {
    double peak = 0.0;
    for (double v : phi.values) peak = std::max(peak, std::abs(v));
    return 1e-10 * (1.0 + peak);
}

std::optional<KktViolation> kkt_check(const SubproblemState& state, const Bounds& bounds) {
    validate_bounds(bounds);
    if (state.parts.at_lower.empty() && state.parts.at_upper.empty()) return std::nullopt;

    const SampledFunction residual = subproblem_residual(state);
    const double tol = kkt_tolerance(state.phi);

    std::optional<KktViolation> worst;
    auto consider = [&](int j, bool at_lower) {
        const double g = -2.0 * inner_product(residual, state.basis->function(j));
        const bool violates = at_lower ? g < -tol : g > tol;
        if (!violates) return;
        if (!worst || std::abs(g) > std::abs(worst->gradient) ||
            (std::abs(g) == std::abs(worst->gradient) && j < worst->index))
            worst = KktViolation{j, g, at_lower};
    };
    for (int j : state.parts.at_lower) consider(j, true);
    for (int j : state.parts.at_upper) consider(j, false);
    return worst;
}

std::vector<double> solve_component(std::span<const double> p_coord, int n, int m,
                                    const ContinuityOrders& orders, const Bounds& bounds,
                                    const ParamGrid& grid, const SolveOptions& options,
                                    ComponentDiagnostics* diagnostics) {
    if (grid.size() < static_cast<std::size_t>(m) + 1)
        throw std::invalid_argument("solve_component: grid must have at least m + 1 points");
    auto basis = std::make_shared<const SampledBasis>(SampledBasis::bernstein(m, grid));
    return solve_component(p_coord, n, std::move(basis), orders, bounds, options, diagnostics);
}

std::vector<double> solve_component(std::span<const double> p_coord, int n,
                                    std::shared_ptr<const SampledBasis> basis,
                                    const ContinuityOrders& orders, const Bounds& bounds,
                                    const SolveOptions& options, ComponentDiagnostics* diagnostics) {
    const int m = static_cast<int>(basis->size()) - 1;
    if (p_coord.size() != static_cast<std::size_t>(n) + 1)
        throw std::invalid_argument("solve_component: coordinate count must be n + 1");
    validate_orders(orders, n, m);
    validate_bounds(bounds);
    if (basis->grid().size() < static_cast<std::size_t>(m) + 1)
        throw std::invalid_argument("solve_component: grid must have at least m + 1 points");

    ComponentDiagnostics local;
    ComponentDiagnostics& diag = diagnostics ? *diagnostics : local;
    diag = ComponentDiagnostics{};

    const EndpointCoords fixed = fixed_endpoint_coords(p_coord, n, m, orders);
    std::vector<double> result(static_cast<std::size_t>(m) + 1, 0.0);
    for (int i = 0; i <= orders.alpha; ++i) result[static_cast<std::size_t>(i)] = fixed.left[static_cast<std::size_t>(i)];
    for (int j = 0; j <= orders.beta; ++j)
        result[static_cast<std::size_t>(m - orders.beta + j)] = fixed.right[static_cast<std::size_t>(j)];

    // Degenerate box: every inner variable is pinned, no subproblem exists.
    if (bounds.lower == bounds.upper) {
        for (int j = orders.alpha + 1; j <= m - orders.beta - 1; ++j)
            result[static_cast<std::size_t>(j)] = bounds.lower;
        diag.pinned_box = true;
        return result;
    }

    const DualBasis* prebuilt = options.backend == Backend::DualIncremental && options.shared_first_duals
                                    ? options.shared_first_duals.get()
                                    : nullptr;
    SubproblemState state =
        first_subproblem(p_coord, n, std::move(basis), fixed, orders, options.backend, prebuilt);

    auto note_consistency = [&] {
        if (options.check_consistency)
            diag.max_coeff_defect = std::max(diag.max_coeff_defect, state.coefficient_defect());
    };
    note_consistency();

    // Current feasible values of the free variables, indexed by control
    // point index. Initialized from the first subproblem optimum clamped
    // into the box.
    std::vector<double> x(static_cast<std::size_t>(m) + 1, 0.0);
    bool x_initialized = false;

    const int outer_cap = 10 * (m + 1);
    int outer = 0;
    while (true) {
        // Feasibility restoration: while the subproblem optimum leaves the
        // box, step from the feasible point toward it, stop at the first
        // bound crossing, and pin that variable.
        while (!state.free_order.empty()) {
            int worst_q = -1;
            double worst_ratio = std::numeric_limits<double>::infinity();
            bool worst_to_lower = false;
            if (!x_initialized) {
                for (std::size_t h = 0; h < state.free_order.size(); ++h)
                    x[static_cast<std::size_t>(state.free_order[h])] =
                        std::clamp(state.coeffs[h], bounds.lower, bounds.upper);
                x_initialized = true;
            }
            for (std::size_t h = 0; h < state.free_order.size(); ++h) {
                const double z = state.coeffs[h];
                if (z >= bounds.lower && z <= bounds.upper) continue;
                const double bound = z < bounds.lower ? bounds.lower : bounds.upper;
                const double xj = x[static_cast<std::size_t>(state.free_order[h])];
                const double ratio = (bound - xj) / (z - xj);
                if (ratio < worst_ratio ||
                    (ratio == worst_ratio && state.free_order[h] < worst_q)) {
                    worst_ratio = ratio;
                    worst_q = state.free_order[h];
                    worst_to_lower = z < bounds.lower;
                }
            }
            if (worst_q < 0) {
                for (std::size_t h = 0; h < state.free_order.size(); ++h)
                    x[static_cast<std::size_t>(state.free_order[h])] = state.coeffs[h];
                break;
            }
            const double step = std::clamp(worst_ratio, 0.0, 1.0);
            for (std::size_t h = 0; h < state.free_order.size(); ++h) {
                double& xj = x[static_cast<std::size_t>(state.free_order[h])];
                xj += step * (state.coeffs[h] - xj);
                xj = std::clamp(xj, bounds.lower, bounds.upper);
            }
            const double s = worst_to_lower ? bounds.lower : bounds.upper;
            transfer_to_bound(state, worst_q, s, worst_to_lower);
            ++diag.to_bound_transfers;
            note_consistency();
        }

        if (options.record_error_history) {
            const SampledFunction residual = subproblem_residual(state);
            diag.error_history.push_back(inner_product(residual, residual));
        }

        const std::optional<KktViolation> violation = kkt_check(state, bounds);
        if (!violation) break;

        if (++outer > outer_cap) {
            std::ostringstream msg;
            msg << "solve_component: iteration cap " << outer_cap << " exceeded; best feasible iterate:";
            for (int j : state.parts.free_set) msg << ' ' << x[static_cast<std::size_t>(j)];
            throw SolverError(msg.str());
        }

        const double s = violation->at_lower ? bounds.lower : bounds.upper;
        transfer_to_free(state, violation->index, s);
        x[static_cast<std::size_t>(violation->index)] = s;
        ++diag.to_free_transfers;
        note_consistency();
    }

    for (int j : state.parts.at_lower) result[static_cast<std::size_t>(j)] = bounds.lower;
    for (int j : state.parts.at_upper) result[static_cast<std::size_t>(j)] = bounds.upper;
    for (std::size_t h = 0; h < state.free_order.size(); ++h)
        result[static_cast<std::size_t>(state.free_order[h])] = state.coeffs[h];

    diag.iterations = state.iteration;
    return result;
}

} // namespace bezred
