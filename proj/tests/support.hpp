#ifndef BEZRED_TESTS_SUPPORT_HPP
#define BEZRED_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "bezred/bernstein.hpp"
#include "bezred/bvls.hpp"
#include "bezred/dual_basis.hpp"

namespace testsupport {

inline double urand(std::mt19937& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int irand(std::mt19937& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline std::vector<double> random_coords(std::mt19937& rng, int count, double lo, double hi) {
    std::vector<double> out(static_cast<std::size_t>(count));
    for (double& v : out) v = urand(rng, lo, hi);
    return out;
}

inline bezred::BezierCurve random_curve(std::mt19937& rng, int n, double lo = -2.0, double hi = 2.0) {
    std::vector<bezred::Point2> pts(static_cast<std::size_t>(n) + 1);
    for (bezred::Point2& p : pts) p = {urand(rng, lo, hi), urand(rng, lo, hi)};
    return bezred::BezierCurve(std::move(pts));
}

/// Distinct parameters drawn from a fine lattice, endpoints included.
inline bezred::ParamGrid random_grid(std::mt19937& rng, int npts) {
    std::vector<int> lattice(999);
    std::iota(lattice.begin(), lattice.end(), 1); // 1..999 -> t in (0,1)
    std::shuffle(lattice.begin(), lattice.end(), rng);
    std::vector<double> pts{0.0, 1.0};
    for (int i = 0; i < npts - 2; ++i) pts.push_back(lattice[static_cast<std::size_t>(i)] / 1000.0);
    std::sort(pts.begin(), pts.end());
    return bezred::ParamGrid(std::move(pts));
}

/// One degree-elevation step: same curve, degree + 1.
inline bezred::BezierCurve elevate_once(const bezred::BezierCurve& c) {
    const int n = c.degree();
    std::vector<bezred::Point2> out(static_cast<std::size_t>(n) + 2);
    out[0] = c.point(0);
    out[static_cast<std::size_t>(n) + 1] = c.point(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) {
        const double a = static_cast<double>(i) / (n + 1);
        const bezred::Point2& prev = c.point(static_cast<std::size_t>(i) - 1);
        const bezred::Point2& cur = c.point(static_cast<std::size_t>(i));
        out[static_cast<std::size_t>(i)] = {a * prev.x + (1.0 - a) * cur.x,
                                            a * prev.y + (1.0 - a) * cur.y};
    }
    return bezred::BezierCurve(std::move(out));
}

inline bezred::BezierCurve elevate_to(const bezred::BezierCurve& c, int target_degree) {
    bezred::BezierCurve out = c;
    while (out.degree() < target_degree) out = elevate_once(out);
    return out;
}

/// Dense row-reduction solve used as the independent reference; no pivoting
/// shortcuts from the library are shared.
inline std::vector<double> gauss_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        if (a[pivot][col] == 0.0) throw std::runtime_error("gauss_solve: singular");
        std::swap(a[pivot], a[col]);
        std::swap(b[pivot], b[col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r][col] / a[col][col];
            for (std::size_t c2 = col; c2 < n; ++c2) a[r][c2] -= f * a[col][c2];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t ri = n; ri-- > 0;) {
        double v = b[ri];
        for (std::size_t c2 = ri + 1; c2 < n; ++c2) v -= a[ri][c2] * x[c2];
        x[ri] = v / a[ri][ri];
    }
    return x;
}

/// Dual functions straight from the Gram inverse: d_i = sum_j (G^-1)_ij b_j.
inline std::vector<bezred::SampledFunction> dense_duals(const bezred::SampledBasis& basis,
                                                        const std::vector<int>& indices) {
    const std::size_t s = indices.size();
    std::vector<std::vector<double>> gram(s, std::vector<double>(s));
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < s; ++j)
            gram[i][j] = bezred::inner_product(basis.function(indices[i]), basis.function(indices[j]));

    std::vector<bezred::SampledFunction> duals(s, bezred::SampledFunction(basis.grid().size()));
    for (std::size_t i = 0; i < s; ++i) {
        std::vector<double> unit(s, 0.0);
        unit[i] = 1.0;
        const std::vector<double> row = gauss_solve(gram, unit);
        for (std::size_t j = 0; j < s; ++j)
            bezred::detail::axpy(row[j], basis.function(indices[j]), duals[i]);
    }
    return duals;
}

inline double biorthogonality_defect(const bezred::DualBasis& d) {
    double worst = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i)
        for (std::size_t j = 0; j < d.size(); ++j) {
            const double ip =
                bezred::inner_product(d.basis().function(d.indices()[j]), d.dual(i));
            worst = std::max(worst, std::abs(ip - (i == j ? 1.0 : 0.0)));
        }
    return worst;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

/// One random coordinate instance of the box-constrained reduction whose
/// box is narrow enough to bind fairly often.
struct BoxedInstance {
    std::vector<double> p;
    int n = 0;
    int m = 0;
    bezred::ContinuityOrders orders;
    bezred::Bounds bounds;
    bezred::ParamGrid grid{{0.0, 1.0}};
};

inline BoxedInstance random_boxed_instance(std::mt19937& rng, int max_inner, int max_n = 14,
                                           int max_m = 10) {
    BoxedInstance inst;
    while (true) {
        inst.m = irand(rng, 2, max_m);
        inst.n = irand(rng, inst.m + 1, max_n);
        const int inner = irand(rng, 1, std::min(max_inner, inst.m - 1));
        // alpha + beta = m - inner - 1, split at random
        const int budget = inst.m - inner - 1;
        inst.orders.alpha = irand(rng, -1, std::min(budget + 1, inst.n - 1));
        inst.orders.beta = budget - inst.orders.alpha;
        if (inst.orders.beta < -1 || inst.orders.beta >= inst.n) continue;
        break;
    }
    inst.p = random_coords(rng, inst.n + 1, -2.0, 2.0);
    inst.grid = bezred::uniform_grid(irand(rng, std::max(inst.m, 6), 40));

    double lo = -2.0, hi = 2.0;
    for (double v : inst.p) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    // anywhere from a generous box down to a clearly binding one
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo) * urand(rng, 0.25, 1.2);
    inst.bounds = {mid - half, mid + half};
    return inst;
}

} // namespace testsupport

#endif
