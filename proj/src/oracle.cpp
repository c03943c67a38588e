#include "bezred/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "bezred/errors.hpp"

namespace bezred::oracle {

namespace {

// Unpivoted LL^T of a symmetric positive definite matrix, then two
// triangular solves. Row-major, s x s.
std::vector<double> cholesky_solve(std::vector<double> a, std::vector<double> rhs, std::size_t s) {
    for (std::size_t j = 0; j < s; ++j) {
        double d = a[j * s + j];
        for (std::size_t k = 0; k < j; ++k) d -= a[j * s + k] * a[j * s + k];
        if (!(d > 0.0))
            throw RankDeficiencyError("normal_equations_solve: Gram matrix not positive definite");
        const double ljj = std::sqrt(d);
        a[j * s + j] = ljj;
        for (std::size_t i = j + 1; i < s; ++i) {
            double v = a[i * s + j];
            for (std::size_t k = 0; k < j; ++k) v -= a[i * s + k] * a[j * s + k];
            a[i * s + j] = v / ljj;
        }
    }
    for (std::size_t i = 0; i < s; ++i) { // L y = rhs
        double v = rhs[i];
        for (std::size_t k = 0; k < i; ++k) v -= a[i * s + k] * rhs[k];
        rhs[i] = v / a[i * s + i];
    }
    for (std::size_t ii = s; ii-- > 0;) { // L^T e = y
        double v = rhs[ii];
        for (std::size_t k = ii + 1; k < s; ++k) v -= a[k * s + ii] * rhs[k];
        rhs[ii] = v / a[ii * s + ii];
    }
    return rhs;
}

} // namespace

std::vector<double> normal_equations_solve(std::span<const int> free_indices,
                                           const SampledFunction& phi, const SampledBasis& basis) {
    const std::size_t s = free_indices.size();
    if (s == 0) return {};
    if (basis.grid().size() < s)
        throw std::invalid_argument("normal_equations_solve: fewer samples than functions");
    std::vector<double> gram(s * s);
    std::vector<double> rhs(s);
    for (std::size_t i = 0; i < s; ++i) {
        const SampledFunction& bi = basis.function(free_indices[i]);
        rhs[i] = inner_product(phi, bi);
        for (std::size_t j = 0; j <= i; ++j) {
            const double g = inner_product(bi, basis.function(free_indices[j]));
            gram[i * s + j] = g;
            gram[j * s + i] = g;
        }
    }
    return cholesky_solve(std::move(gram), std::move(rhs), s);
}

namespace {

enum class Assign { Free, Lower, Upper };

struct Branch {
    std::vector<double> values; // full m+1 coordinate vector
    double error2 = std::numeric_limits<double>::infinity();
    bool strict_kkt = false;
    bool feasible = false;
};

} // namespace

std::vector<double> brute_force_box_solve(std::span<const double> p_coord, int n, int m,
                                          const ContinuityOrders& orders, const Bounds& bounds,
                                          const ParamGrid& grid) {
    validate_orders(orders, n, m);
    validate_bounds(bounds);
    if (grid.size() < static_cast<std::size_t>(m) + 1)
        throw std::invalid_argument("brute_force_box_solve: grid must have at least m + 1 points");

    const EndpointCoords fixed = fixed_endpoint_coords(p_coord, n, m, orders);
    std::vector<int> inner;
    for (int j = orders.alpha + 1; j <= m - orders.beta - 1; ++j) inner.push_back(j);
    const std::size_t k = inner.size();
    if (k > 8)
        throw std::invalid_argument("brute_force_box_solve: refusing more than 8 inner variables");

    // Target minus the continuity-fixed part; bound contributions are
    // removed per branch.
    const SampledBasis target = SampledBasis::bernstein(m, grid);
    SampledFunction base = sample_polynomial(p_coord, grid);
    for (int i = 0; i <= orders.alpha; ++i)
        detail::axpy(-fixed.left[static_cast<std::size_t>(i)], target.function(i), base);
    for (int j = 0; j <= orders.beta; ++j)
        detail::axpy(-fixed.right[static_cast<std::size_t>(j)], target.function(m - orders.beta + j), base);

    std::vector<double> skeleton(static_cast<std::size_t>(m) + 1, 0.0);
    for (int i = 0; i <= orders.alpha; ++i) skeleton[static_cast<std::size_t>(i)] = fixed.left[static_cast<std::size_t>(i)];
    for (int j = 0; j <= orders.beta; ++j)
        skeleton[static_cast<std::size_t>(m - orders.beta + j)] = fixed.right[static_cast<std::size_t>(j)];

    std::size_t total = 1;
    for (std::size_t i = 0; i < k; ++i) total *= 3;

    Branch best_kkt, best_feasible;
    std::vector<Assign> assign(k);
    std::vector<int> free_subset;
    for (std::size_t code = 0; code < total; ++code) {
        std::size_t c = code;
        for (std::size_t i = 0; i < k; ++i, c /= 3) assign[i] = static_cast<Assign>(c % 3);

        SampledFunction phi = base;
        free_subset.clear();
        for (std::size_t i = 0; i < k; ++i) {
            if (assign[i] == Assign::Free) {
                free_subset.push_back(inner[i]);
            } else {
                const double s = assign[i] == Assign::Lower ? bounds.lower : bounds.upper;
                detail::axpy(-s, target.function(inner[i]), phi);
            }
        }

        std::vector<double> e;
        try {
            e = normal_equations_solve(free_subset, phi, target);
        } catch (const RankDeficiencyError&) {
            continue;
        }

        bool in_box = true;
        bool strictly_inside = true;
        for (double value : e) {
            if (value < bounds.lower || value > bounds.upper) in_box = false;
            if (!(value > bounds.lower && value < bounds.upper)) strictly_inside = false;
        }
        if (!in_box) continue; // this branch's optimum is not a candidate

        Branch br;
        br.feasible = true;
        br.values = skeleton;
        for (std::size_t i = 0, f = 0; i < k; ++i) {
            if (assign[i] == Assign::Free)
                br.values[static_cast<std::size_t>(inner[i])] = e[f++];
            else
                br.values[static_cast<std::size_t>(inner[i])] =
                    assign[i] == Assign::Lower ? bounds.lower : bounds.upper;
        }

        SampledFunction residual = phi;
        for (std::size_t f = 0; f < free_subset.size(); ++f)
            detail::axpy(-e[f], target.function(free_subset[f]), residual);
        br.error2 = inner_product(residual, residual);

        const double tol = kkt_tolerance(phi);
        bool kkt_ok = strictly_inside;
        for (std::size_t i = 0; i < k && kkt_ok; ++i) {
            if (assign[i] == Assign::Free) continue;
            const double g = -2.0 * inner_product(residual, target.function(inner[i]));
            if (assign[i] == Assign::Lower && g < -tol) kkt_ok = false;
            if (assign[i] == Assign::Upper && g > tol) kkt_ok = false;
        }
        br.strict_kkt = kkt_ok;

        if (br.strict_kkt && br.error2 < best_kkt.error2) best_kkt = br;
        if (br.error2 < best_feasible.error2) best_feasible = br;
    }

    const Branch& winner = best_kkt.strict_kkt ? best_kkt : best_feasible;
    if (!std::isfinite(winner.error2))
        throw SolverError("brute_force_box_solve: no feasible branch (should not happen)");
    return winner.values;
}

} // namespace bezred::oracle
