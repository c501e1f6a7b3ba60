#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "capssc/grid.hpp"

using namespace capssc;

namespace {

quarter_grid fill(int n, double extent, axis_parity px, axis_parity py,
                  double (*f)(double, double)) {
    quarter_grid g(n, extent, px, py);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) g.at(i, j) = f(i * g.spacing, j * g.spacing);
    return g;
}

double quad(double x, double y) { return 1.0 + 0.5 * x + 0.25 * y + x * y - 0.125 * x * x + 0.0625 * y * y; }

}  // namespace

TEST_CASE("reflected access applies the parity signs") {
    quarter_grid g(9, 2.0, axis_parity::odd, axis_parity::even);
    g.at(2, 3) = 1.5;
    CHECK(g.value(2, 3) == 1.5);
    CHECK(g.value(-2, 3) == -1.5);
    CHECK(g.value(2, -3) == 1.5);
    CHECK(g.value(-2, -3) == -1.5);
    CHECK(g.value(20, 3) == 0.0);  // beyond the stored extent
}

TEST_CASE("interpolation is exact at the nodes") {
    auto g = fill(17, 2.0, axis_parity::even, axis_parity::even, quad);
    for (int j = 0; j < 17; ++j)
        for (int i = 0; i < 17; ++i)
            CHECK(g.sample(i * g.spacing, j * g.spacing) == doctest::Approx(g.at(i, j)).epsilon(1e-13));
}

TEST_CASE("interpolation reproduces quadratics away from the padding") {
    auto g = fill(33, 2.0, axis_parity::even, axis_parity::even, quad);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.3, 1.6);
    for (int k = 0; k < 200; ++k) {
        const double x = u(rng), y = u(rng);
        CHECK(g.sample(x, y) == doctest::Approx(quad(x, y)).epsilon(1e-12));
    }
}

TEST_CASE("clipped interpolation stays inside the cell corner range") {
    quarter_grid g(9, 2.0);
    // a sharp spike invites bicubic overshoot next to it
    g.at(4, 4) = 1.0;
    const double h = g.spacing;
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(0.0, 2.0);
    for (int k = 0; k < 500; ++k) {
        const double x = u(rng), y = u(rng);
        const double v = g.sample_monotone(x, y);
        const int i = std::min(int(x / h), g.n - 2), j = std::min(int(y / h), g.n - 2);
        double lo = 1e300, hi = -1e300;
        for (int dj = 0; dj <= 1; ++dj)
            for (int di = 0; di <= 1; ++di) {
                lo = std::min(lo, g.at(i + di, j + dj));
                hi = std::max(hi, g.at(i + di, j + dj));
            }
        CHECK(v >= lo - 1e-12);
        CHECK(v <= hi + 1e-12);
    }
}

TEST_CASE("derivative stencils converge at fourth order") {
    auto f = [](double x, double y) { return std::sin(1.3 * x) * std::cos(0.7 * y); };
    auto fx = [](double x, double y) { return 1.3 * std::cos(1.3 * x) * std::cos(0.7 * y); };
    for (int n : {65, 129}) {
        quarter_grid g(n, 2.0, axis_parity::odd, axis_parity::even);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) g.at(i, j) = f(i * g.spacing, j * g.spacing);
        const int i = n / 3, j = n / 2;
        const vec2 got = gradient_at(g, i, j);
        const double err = std::abs(got.x - fx(i * g.spacing, j * g.spacing));
        const double h4 = std::pow(g.spacing, 4);
        CHECK(err < 20.0 * h4);
    }
}

TEST_CASE("one-sided axis derivative matches the analytic slope") {
    // omega = sin(2x) g(y) is odd in x with d1 omega(0,y) = 2 g(y)
    const int n = 129;
    quarter_grid g(n, 2.0, axis_parity::odd, axis_parity::even);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            g.at(i, j) = std::sin(2.0 * i * g.spacing) * std::cos(j * g.spacing);
    const int j = 40;
    const double want = 2.0 * std::cos(j * g.spacing);
    CHECK(one_sided_dx_at_axis(g, j) == doctest::Approx(want).epsilon(1e-5));
}

TEST_CASE("box sups pick out the steep corner") {
    const int n = 65;
    quarter_grid g(n, 2.0, axis_parity::even, axis_parity::even);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const double x = i * g.spacing, y = j * g.spacing;
            g.at(i, j) = std::exp(2.0 * x) * std::cos(y);
        }
    const box_sups small = sup_derivatives_box(g, 0.5, 0.5);
    const box_sups wide = sup_derivatives_box(g, 2.0, 2.0);
    CHECK(wide.grad > small.grad);
    CHECK(wide.hess > small.hess);
    // analytic sup of |grad| on [0,1/2]^2 is at (1/2, 0): 2 e^{1}
    CHECK(small.grad == doctest::Approx(2.0 * std::exp(1.0)).epsilon(0.02));
}

TEST_CASE("norms reconstruct the full plane from one quadrant") {
    const int n = 257;
    quarter_grid g(n, 2.0, axis_parity::odd, axis_parity::odd);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            g.at(i, j) = std::sin(M_PI * i * g.spacing / 2.0) * std::sin(M_PI * j * g.spacing / 2.0);
    const field_norms fn = norms(g);
    CHECK(fn.sup == doctest::Approx(1.0).epsilon(1e-6));
    // integral of |sin sin| over [-2,2]^2 = (8/pi)^2; of sin^2 sin^2 = 4
    CHECK(fn.l1 == doctest::Approx(64.0 / (M_PI * M_PI)).epsilon(1e-4));
    CHECK(fn.l2 == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("axis parity enforcement zeroes the stored axes") {
    quarter_grid g(9, 2.0, axis_parity::odd, axis_parity::odd);
    for (int j = 0; j < 9; ++j)
        for (int i = 0; i < 9; ++i) g.at(i, j) = 1.0;
    g.enforce_axis_parity();
    for (int k = 0; k < 9; ++k) {
        CHECK(g.at(0, k) == 0.0);
        CHECK(g.at(k, 0) == 0.0);
    }
    CHECK(g.at(3, 3) == 1.0);
}
