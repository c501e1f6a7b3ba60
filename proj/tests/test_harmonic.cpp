#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "capssc/harmonic_error.hpp"
#include "capssc/rng.hpp"

using namespace capssc;

namespace {

const double R = bs_law_radius;  // sqrt(2)

double smooth01(double s) {
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    return s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

// odd-odd vorticity supported inside the sqrt(2) disk
double test_omega(vec2 y) {
    const double sgn = (y.x < 0 ? -1.0 : 1.0) * (y.y < 0 ? -1.0 : 1.0);
    const double a = std::abs(y.x), b = std::abs(y.y);
    auto bump = [](double c) { return smooth01(c / 0.15) * smooth01((0.84 - c) / 0.15); };
    return sgn * bump(a) * bump(b);
}

vec2 fd_grad(const harmonic_stream& f, vec2 p) {
    const double h = 1e-6;
    return {(f.value({p.x + h, p.y}) - f.value({p.x - h, p.y})) / (2 * h),
            (f.value({p.x, p.y + h}) - f.value({p.x, p.y - h})) / (2 * h)};
}

}  // namespace

TEST_CASE("harmonic stream closed forms for the first two modes") {
    harmonic_stream m2{{1.0}, R};
    harmonic_stream m4{{0.0, 1.0}, R};
    for (vec2 p : {vec2{0.3, 0.2}, vec2{-0.5, 0.7}, vec2{0.1, -0.9}}) {
        CHECK(m2.value(p) == doctest::Approx(2.0 * p.x * p.y / (R * R)).epsilon(1e-13));
        const double want4 = 4.0 * p.x * p.y * (p.x * p.x - p.y * p.y) / (R * R * R * R);
        CHECK(m4.value(p) == doctest::Approx(want4).epsilon(1e-12));
    }
}

TEST_CASE("harmonic stream is odd under both reflections") {
    harmonic_stream f{{0.7, -0.3, 0.11, 0.05}, R};
    for (vec2 p : {vec2{0.4, 0.6}, vec2{0.9, 0.1}, vec2{0.25, 0.33}}) {
        CHECK(f.value({-p.x, p.y}) == doctest::Approx(-f.value(p)).epsilon(1e-12));
        CHECK(f.value({p.x, -p.y}) == doctest::Approx(-f.value(p)).epsilon(1e-12));
        CHECK(f.value({-p.x, -p.y}) == doctest::Approx(f.value(p)).epsilon(1e-12));
    }
}

TEST_CASE("gradient and perp gradient match finite differences") {
    harmonic_stream f{{0.4, 0.2, -0.1}, R};
    for (vec2 p : {vec2{0.3, 0.1}, vec2{-0.6, 0.45}, vec2{0.05, -0.8}}) {
        const vec2 g = f.grad(p);
        const vec2 fd = fd_grad(f, p);
        CHECK(g.x == doctest::Approx(fd.x).epsilon(1e-6));
        CHECK(g.y == doctest::Approx(fd.y).epsilon(1e-6));
        const vec2 gp = f.grad_perp(p);
        CHECK(gp.x == doctest::Approx(-g.y).epsilon(1e-13));
        CHECK(gp.y == doctest::Approx(g.x).epsilon(1e-13));
    }
}

TEST_CASE("gradient energy has the exact mode sum") {
    harmonic_stream f{{0.5, -0.25, 0.125}, R};
    const double want =
        std::sqrt(M_PI * (2.0 * 0.25 + 4.0 * 0.0625 + 6.0 * 0.015625));
    CHECK(f.grad_l2() == doctest::Approx(want).epsilon(1e-13));

    // quadrature of |grad F|^2 over the disk agrees
    const auto gf = [&](vec2 p) { return f.grad(p); };
    const double quad = std::sqrt(h1_inner_product(gf, gf, R));
    CHECK(quad == doctest::Approx(want).epsilon(1e-6));

    f.normalize_grad_l2();
    CHECK(f.grad_l2() == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("distinct modes are H1-orthogonal") {
    harmonic_stream a{{1.0}, R};
    harmonic_stream b{{0.0, 1.0}, R};
    const double ip = h1_inner_product([&](vec2 p) { return a.grad(p); },
                                       [&](vec2 p) { return b.grad(p); }, R);
    CHECK(std::abs(ip) <= 1e-8);
}

TEST_CASE("synthetic harmonic discrepancy is recovered exactly") {
    // the internal reference solve matches this one parameter for parameter,
    // so the subtraction cancels and e reduces to the injected field
    disk_spec ref{R, 256, 512};
    const auto sol = poisson_solve(test_omega, ref);

    harmonic_stream f{{0.0, 0.3}, R};  // pure m = 4
    const velocity_field u_full = [&](vec2 p) { return sol.velocity(p) + f.grad_perp(p); };
    const double k0 = 1.0;
    const auto e = build_error_field(u_full, test_omega, k0);

    REQUIRE(!e.probes.empty());
    REQUIRE(e.samples.size() == e.probes.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < e.probes.size(); ++i) {
        const vec2 want = f.grad_perp(e.probes[i]);
        worst = std::max({worst, std::abs(e.samples[i].x - want.x), std::abs(e.samples[i].y - want.y)});
    }
    CHECK(worst <= 1e-10);

    // harmonic field: mean value property, divergence and curl all clean
    CHECK(mean_value_residual(e) <= 1e-8);
    CHECK(e.div_residual <= 1e-6);
    CHECK(e.curl_residual <= 1e-6);

    // quadrature energy of e matches the closed-form mode sum
    CHECK(e.stream_l2 == doctest::Approx(f.grad_l2()).epsilon(1e-4));

    // gradient sup: |d/dz (c z^4 / R^4)'| = 12 c |z|^2 / R^4 peaks on |z| = 1/2
    const auto c1 = c1_bound_check(e);
    CHECK(c1.measured_c1 > 0.0);
    CHECK(c1.ratio == doctest::Approx(c1.measured_c1 / std::sqrt(k0)).epsilon(1e-12));

    // axis-linear bound holds with a modest constant for this smooth field
    const double ratio = odd_pointwise_check(e);
    CHECK(ratio > 0.0);
    CHECK(ratio < 5.0);
}

TEST_CASE("a fixed constant covers a family of unit-energy harmonic fields") {
    disk_spec ref{R, 192, 256};
    const auto sol = poisson_solve(test_omega, ref);

    auto rng = seeded_engine(777);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    double worst_pointwise = 0.0, worst_c1 = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        harmonic_stream f{{coef(rng), coef(rng), coef(rng), coef(rng)}, R};
        if (f.grad_l2() < 1e-3) continue;
        f.normalize_grad_l2();  // unit H1 energy = sqrt(k0) with k0 = 1
        const velocity_field u_full = [&](vec2 p) { return sol.velocity(p) + f.grad_perp(p); };
        const auto e = build_error_field(u_full, test_omega, 1.0, 192, 256);
        worst_pointwise = std::max(worst_pointwise, odd_pointwise_check(e));
        worst_c1 = std::max(worst_c1, c1_bound_check(e).measured_c1);
    }
    // both certified constants are order one for unit-energy data
    CHECK(worst_pointwise > 0.0);
    CHECK(worst_pointwise < 20.0);
    CHECK(worst_c1 > 0.0);
    CHECK(worst_c1 < 20.0);
}

TEST_CASE("two-domain discrepancy passes the harmonic screens") {
    // velocity from the radius-2 solve differs from the sqrt(2) reference by
    // a genuinely harmonic field on the smaller disk
    disk_spec big{2.0, 256, 512};
    const auto sol = poisson_solve(test_omega, big);
    const velocity_field u_full = [&](vec2 p) { return sol.velocity(p); };
    const auto e = build_error_field(u_full, test_omega, 1.0);

    double emax = 0.0;
    for (const vec2 s : e.samples) emax = std::max({emax, std::abs(s.x), std::abs(s.y)});
    CHECK(emax > 1e-4);  // the domains genuinely disagree
    // residuals carry the discretization error of two independent solves plus
    // the finite-difference probe, so screen at a tenth of the field scale
    CHECK(mean_value_residual(e) <= 0.1 * emax + 1e-6);
    CHECK(e.div_residual <= 0.1 * emax + 1e-6);
    CHECK(e.curl_residual <= 0.1 * emax + 1e-6);
    CHECK_NOTHROW(odd_pointwise_check(e));
}

TEST_CASE("axis contamination is rejected") {
    disk_spec ref{R, 192, 256};
    const auto sol = poisson_solve(test_omega, ref);
    // Im(z^3)/R^3 is odd in x2 but even in x1, so e_1(0, x2) = 3 x2^2 / R^3
    const velocity_field u_full = [&](vec2 p) {
        const double r3 = R * R * R;
        const vec2 bad{-(3.0 * p.x * p.x - 3.0 * p.y * p.y) / r3, 6.0 * p.x * p.y / r3};
        return sol.velocity(p) + bad;
    };
    const auto e = build_error_field(u_full, test_omega, 1.0, 192, 256);
    CHECK_THROWS(odd_pointwise_check(e));
}

TEST_CASE("c1 check rejects zero energy with a live field") {
    disk_spec ref{R, 128, 128};
    const auto sol = poisson_solve(test_omega, ref);
    harmonic_stream f{{0.2}, R};
    const velocity_field u_full = [&](vec2 p) { return sol.velocity(p) + f.grad_perp(p); };
    const auto e = build_error_field(u_full, test_omega, 0.0, 128, 128);
    CHECK_THROWS(c1_bound_check(e));
}
