#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

#include "bezred/errors.hpp"
#include "bezred/oracle.hpp"
#include "bezred/reducer.hpp"
#include "support.hpp"

using namespace bezred;
using namespace testsupport;

TEST_SUITE_BEGIN("oracle");

TEST_CASE("one-dimensional normal equations reduce to a quotient") {
    const ParamGrid grid({0.0, 0.5, 1.0});
    const SampledBasis basis = SampledBasis::bernstein(1, grid);
    std::mt19937 rng(7);
    const SampledFunction phi(random_coords(rng, 3, -2.0, 2.0));
    const std::vector<int> idx{0};
    const std::vector<double> e = oracle::normal_equations_solve(idx, phi, basis);
    REQUIRE(e.size() == 1);
    CHECK(e[0] == doctest::Approx(inner_product(phi, basis.function(0)) /
                                  inner_product(basis.function(0), basis.function(0)))
                      .epsilon(1e-14));
}

TEST_CASE("hand-sized Gram system") {
    const ParamGrid grid({0.0, 0.5, 1.0});
    const SampledBasis basis = SampledBasis::bernstein(1, grid);
    // G = [[1.25, 0.25], [0.25, 1.25]]
    SampledFunction g(3);
    detail::axpy(2.0, basis.function(0), g);
    detail::axpy(-3.0, basis.function(1), g);
    const std::vector<int> idx{0, 1};
    const std::vector<double> e = oracle::normal_equations_solve(idx, g, basis);
    CHECK(e[0] == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(e[1] == doctest::Approx(-3.0).epsilon(1e-13));
}

TEST_CASE("normal equations and dual projection agree both ways") {
    std::mt19937 rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        const int m = irand(rng, 1, 9);
        const ParamGrid grid = random_grid(rng, irand(rng, m + 2, 25));
        auto basis = std::make_shared<const SampledBasis>(SampledBasis::bernstein(m, grid));
        std::vector<int> subset;
        for (int j = 0; j <= m; ++j)
            if (irand(rng, 0, 1)) subset.push_back(j);
        if (subset.empty()) subset.push_back(0);

        const SampledFunction phi(random_coords(rng, static_cast<int>(grid.size()), -4.0, 4.0));
        const std::vector<double> gram_e = oracle::normal_equations_solve(subset, phi, *basis);

        const DualBasis d = build_dual(basis, subset);
        const std::vector<double> proj = project(d, phi);
        std::vector<double> aligned(subset.size());
        double scale = 1.0;
        for (std::size_t i = 0; i < subset.size(); ++i) {
            aligned[i] = proj[static_cast<std::size_t>(d.position_of(subset[i]))];
            scale = std::max(scale, std::abs(aligned[i]));
        }
        CHECK(max_abs_diff(gram_e, aligned) / scale <= 1e-8);
    }
}

TEST_CASE("singular Gram raises a rank error") {
    // third function is the sum of the first two
    const ParamGrid grid({0.0, 0.3, 0.7, 1.0});
    const SampledFunction f(std::vector<double>{1.0, 0.5, 0.0, 0.25});
    const SampledFunction g(std::vector<double>{0.0, 1.0, 0.5, 0.75});
    SampledFunction sum(4);
    for (std::size_t k = 0; k < 4; ++k) sum[k] = f[k] + g[k];
    const SampledBasis basis(grid, {f, g, sum});
    const SampledFunction phi(std::vector<double>{1.0, 2.0, 0.0, -1.0});
    const std::vector<int> idx{0, 1, 2};
    CHECK_THROWS_AS(oracle::normal_equations_solve(idx, phi, basis), RankDeficiencyError);

    // undersized grids are rejected before factorization
    const SampledBasis bern = SampledBasis::bernstein(2, ParamGrid({0.25, 0.75}));
    CHECK_THROWS_AS(
        oracle::normal_equations_solve(idx, SampledFunction(std::vector<double>{1.0, 2.0}), bern),
        std::invalid_argument);
}

TEST_CASE("brute force with one inner variable clamps the unconstrained optimum") {
    std::mt19937 rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 5, m = 3;
        const ContinuityOrders orders{1, 0}; // inner = {2}, a single variable
        const std::vector<double> p = random_coords(rng, n + 1, -2.0, 2.0);
        const ParamGrid grid = uniform_grid(8);
        const Bounds tight{-0.25, 0.25};

        const std::vector<double> boxed = oracle::brute_force_box_solve(p, n, m, orders, tight, grid);
        const Bounds loose{-1e9, 1e9};
        const std::vector<double> free_sol = oracle::brute_force_box_solve(p, n, m, orders, loose, grid);
        CHECK(boxed[2] == doctest::Approx(std::clamp(free_sol[2], tight.lower, tight.upper))
                              .epsilon(1e-12));
    }
}

TEST_CASE("huge box reproduces the unconstrained subproblem") {
    std::mt19937 rng(42);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = irand(rng, 6, 9);
        const int m = irand(rng, 4, n - 1);
        const ContinuityOrders orders{irand(rng, 0, 1), irand(rng, 0, 1)};
        const std::vector<double> p = random_coords(rng, n + 1, -2.0, 2.0);
        const ParamGrid grid = uniform_grid(irand(rng, m + 1, 20));
        const Bounds huge{-1e12, 1e12};

        const std::vector<double> solved = oracle::brute_force_box_solve(p, n, m, orders, huge, grid);

        const EndpointCoords fixed = fixed_endpoint_coords(p, n, m, orders);
        const SampledBasis source = SampledBasis::bernstein(n, grid);
        const SampledBasis target = SampledBasis::bernstein(m, grid);
        SampledFunction phi(grid.size());
        for (int h = 0; h <= n; ++h) detail::axpy(p[static_cast<std::size_t>(h)], source.function(h), phi);
        for (int i = 0; i <= orders.alpha; ++i)
            detail::axpy(-fixed.left[static_cast<std::size_t>(i)], target.function(i), phi);
        for (int j = 0; j <= orders.beta; ++j)
            detail::axpy(-fixed.right[static_cast<std::size_t>(j)], target.function(m - orders.beta + j), phi);
        std::vector<int> inner;
        for (int j = orders.alpha + 1; j <= m - orders.beta - 1; ++j) inner.push_back(j);
        const std::vector<double> e = oracle::normal_equations_solve(inner, phi, target);
        for (std::size_t i = 0; i < inner.size(); ++i)
            CHECK(solved[static_cast<std::size_t>(inner[i])] == doctest::Approx(e[i]).epsilon(1e-10));
    }
}

TEST_CASE("refuses oversized enumerations") {
    std::mt19937 rng(63);
    const std::vector<double> p = random_coords(rng, 13, -1.0, 1.0);
    CHECK_THROWS_AS(oracle::brute_force_box_solve(p, 12, 11, {0, 0}, {-1.0, 1.0}, uniform_grid(14)),
                    std::invalid_argument);
}

TEST_SUITE_END();
