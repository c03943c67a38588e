#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "bezred/bernstein.hpp"
#include "support.hpp"

using namespace bezred;
using namespace testsupport;

TEST_SUITE_BEGIN("bernstein");

TEST_CASE("binomial coefficients are exact") {
    CHECK(binomial(5, 2) == 10);
    CHECK(binomial(9, 0) == 1);
    CHECK(binomial(18, 9) == 48620);
    CHECK(binomial(0, 0) == 1);
    CHECK(binomial(64, 32) == 1832624140942590534LL);

    // Pascal identity as the reference recurrence
    for (int n = 1; n <= 30; ++n)
        for (int i = 1; i < n; ++i)
            CHECK(binomial(n, i) == binomial(n - 1, i - 1) + binomial(n - 1, i));

    CHECK_THROWS_AS(binomial(5, 6), std::invalid_argument);
    CHECK_THROWS_AS(binomial(-1, 0), std::invalid_argument);
    CHECK_THROWS_AS(binomial(65, 3), std::invalid_argument);
}

TEST_CASE("grid construction and validation") {
    const ParamGrid g = uniform_grid(2);
    CHECK(g.size() == 3);
    CHECK(g[1] == doctest::Approx(0.5));

    const ParamGrid g20 = uniform_grid(20);
    CHECK(g20.size() == 21);
    CHECK(g20[7] == doctest::Approx(0.35));

    const ParamGrid g1 = uniform_grid(1);
    CHECK(g1[0] == 0.0);
    CHECK(g1[1] == 1.0);

    CHECK_THROWS_AS(uniform_grid(0), std::invalid_argument);
    CHECK_THROWS_AS(ParamGrid({0.0, 0.5, 0.5, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(ParamGrid({0.0, 0.7, 0.4}), std::invalid_argument);
    CHECK_THROWS_AS(ParamGrid({-0.1, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(ParamGrid({0.5}), std::invalid_argument);
}

TEST_CASE("bernstein values on small grids") {
    const ParamGrid g({0.0, 0.5, 1.0});
    const auto b1 = bernstein_values(1, g);
    CHECK(b1[0].values == std::vector<double>{1.0, 0.5, 0.0});
    CHECK(b1[1].values == std::vector<double>{0.0, 0.5, 1.0});

    const auto b2 = bernstein_values(2, g);
    CHECK(b2[1][1] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("partition of unity and symmetry up to degree 20") {
    std::mt19937 rng(12);
    const ParamGrid g = random_grid(rng, 25);
    std::vector<double> mirrored;
    for (std::size_t k = g.size(); k-- > 0;) mirrored.push_back(1.0 - g[k]);
    const ParamGrid gm(std::move(mirrored));

    for (int n = 0; n <= 20; ++n) {
        const auto b = bernstein_values(n, g);
        const auto bm = bernstein_values(n, gm);
        for (std::size_t k = 0; k < g.size(); ++k) {
            double sum = 0.0;
            for (int i = 0; i <= n; ++i) sum += b[static_cast<std::size_t>(i)][k];
            CHECK(std::abs(sum - 1.0) <= 1e-14);
            // B_i^n(t) = B_{n-i}^n(1-t); mirrored grid reverses point order
            for (int i = 0; i <= n; ++i)
                CHECK(std::abs(b[static_cast<std::size_t>(i)][k] -
                               bm[static_cast<std::size_t>(n - i)][g.size() - 1 - k]) <= 1e-14);
        }
    }
}

TEST_CASE("inner product: values, symmetry, bilinearity") {
    const ParamGrid g({0.0, 0.5, 1.0});
    const auto b1 = bernstein_values(1, g);
    CHECK(inner_product(b1[0], b1[1]) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(inner_product(b1[0], b1[0]) == doctest::Approx(1.25).epsilon(1e-15));

    std::mt19937 rng(34);
    const SampledFunction zero(3);
    const SampledFunction f(random_coords(rng, 3, -5.0, 5.0));
    CHECK(inner_product(f, zero) == 0.0);

    for (int trial = 0; trial < 50; ++trial) {
        const SampledFunction a(random_coords(rng, 7, -3.0, 3.0));
        const SampledFunction b(random_coords(rng, 7, -3.0, 3.0));
        const SampledFunction c(random_coords(rng, 7, -3.0, 3.0));
        const double s = urand(rng, -2.0, 2.0);
        CHECK(inner_product(a, b) == doctest::Approx(inner_product(b, a)).epsilon(1e-13));
        SampledFunction combo(7);
        for (std::size_t k = 0; k < 7; ++k) combo[k] = s * a[k] + b[k];
        CHECK(inner_product(combo, c) ==
              doctest::Approx(s * inner_product(a, c) + inner_product(b, c)).epsilon(1e-13));
    }

    CHECK_THROWS_AS(inner_product(SampledFunction(3), SampledFunction(4)), std::invalid_argument);
}

TEST_CASE("curve evaluation") {
    const BezierCurve line({{0.0, 0.0}, {2.0, 4.0}});
    const Point2 p = eval_curve(line, 0.25);
    CHECK(p.x == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p.y == doctest::Approx(1.0).epsilon(1e-15));

    std::mt19937 rng(56);
    const BezierCurve c = random_curve(rng, 6);
    const Point2 start = eval_curve(c, 0.0);
    const Point2 end = eval_curve(c, 1.0);
    CHECK(start.x == c.point(0).x);
    CHECK(start.y == c.point(0).y);
    CHECK(end.x == c.point(6).x);
    CHECK(end.y == c.point(6).y);

    CHECK_THROWS_AS(eval_curve(c, -0.01), std::invalid_argument);
    CHECK_THROWS_AS(eval_curve(c, 1.01), std::invalid_argument);
}

TEST_CASE("curve evaluation agrees with the sampled basis expansion") {
    std::mt19937 rng(78);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = irand(rng, 1, 10);
        const BezierCurve c = random_curve(rng, n);
        const ParamGrid g = random_grid(rng, 12);
        const auto b = bernstein_values(n, g);
        for (std::size_t k = 0; k < g.size(); ++k) {
            double x = 0.0, y = 0.0;
            for (int i = 0; i <= n; ++i) {
                x += c.point(static_cast<std::size_t>(i)).x * b[static_cast<std::size_t>(i)][k];
                y += c.point(static_cast<std::size_t>(i)).y * b[static_cast<std::size_t>(i)][k];
            }
            const Point2 p = eval_curve(c, g[k]);
            CHECK(p.x == doctest::Approx(x).epsilon(1e-12));
            CHECK(p.y == doctest::Approx(y).epsilon(1e-12));
        }
    }
}

TEST_CASE("forward differences") {
    CHECK(forward_difference(std::vector<double>{3.0, 3.0, 3.0}, 1) == 0.0);
    CHECK(forward_difference(std::vector<double>{1.0, 4.0, 9.0}, 2) == doctest::Approx(2.0));
    CHECK(forward_difference(std::vector<double>{5.0, 1.0}, 0) == 5.0);

    // binomial-signed expansion as the reference
    std::mt19937 rng(90);
    for (int trial = 0; trial < 20; ++trial) {
        const int len = irand(rng, 2, 9);
        const std::vector<double> xs = random_coords(rng, len, -4.0, 4.0);
        for (int order = 0; order < len; ++order) {
            double expected = 0.0;
            for (int j = 0; j <= order; ++j)
                expected += ((order - j) % 2 == 0 ? 1.0 : -1.0) *
                            static_cast<double>(binomial(order, j)) * xs[static_cast<std::size_t>(j)];
            CHECK(forward_difference(xs, order) == doctest::Approx(expected).epsilon(1e-12));
        }
    }
    CHECK(forward_difference(std::vector<double>{0.0, 1.0, 0.0, 1.0}, 3) == doctest::Approx(4.0));

    CHECK_THROWS_AS(forward_difference(std::vector<double>{1.0, 2.0}, 2), std::invalid_argument);
}

TEST_SUITE_END();
