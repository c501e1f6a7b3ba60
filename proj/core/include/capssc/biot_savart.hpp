#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "capssc/disk_poisson.hpp"
#include "capssc/point.hpp"

namespace capssc {

using scalar_field = std::function<double(vec2)>;

// disk radius on which the corner-box velocity law is certified
inline constexpr double bs_law_radius = 1.4142135623730951;

// axis-aligned box [lo.x, hi.x] x [lo.y, hi.y] anchored at the unit corner
struct corner_box {
    vec2 lo{};
    vec2 hi{1.0, 1.0};
    bool empty() const { return lo.x >= hi.x || lo.y >= hi.y; }
};

// the box Q(2x) = [2x1, 1] x [2x2, 1], empty when a doubled coordinate
// reaches 1
corner_box corner_region(vec2 x);

// I(x) = integral of y1 y2 / |y|^4 * omega(y) over Q(2x), by tensor-product
// Gauss-Legendre panels graded toward the box corner; empty box gives 0
double main_integral(const scalar_field& omega, vec2 x);

struct bs_remainder {
    double b1 = 0.0;
    double b2 = 0.0;
    double bound1 = 0.0;
    double bound2 = 0.0;
    bool within = false;
};

// Invert the corner law u_j = (-1)^j (4/pi) (I + B_j) x_j for the
// remainders. u_probe must use the clockwise-for-positive-vorticity
// orientation u = (d2 psi, -d1 psi), the negative of velocity_from_stream.
// Throws when either coordinate of x vanishes.
bs_remainder extract_remainder(vec2 u_probe, const scalar_field& omega, vec2 x);

// Remainder bounds
//   bound_j = c0 ( w_sup (1 + min{ log(1 + x_o/x_j),
//                                  x_o grad_sup / w_sup }) + sqrt(k0) ),
// with x_o the opposite coordinate. grad_sup_local should dominate the
// gradient sup over [0, 2 max(x1,x2)]^2 so one value serves both components.
std::pair<double, double> remainder_bound(vec2 x, double omega_sup, double grad_sup_local, double k0,
                                          double c0_const);

// sup |grad omega| over the square [0, w]^2, by centered differences on a
// lattice
double window_gradient_sup(const scalar_field& omega, double w);

// sup |omega| over the disk of radius R, lattice sampled
double field_sup_on_disk(const scalar_field& omega, double radius, int n_side = 512);

struct bs_point_report {
    vec2 x;
    double b1 = 0.0, b2 = 0.0;
    double base1 = 0.0, base2 = 0.0;    // bounds with c0 = 1
    double margin1 = 0.0, margin2 = 0.0;  // fitted bound minus |b|
};

struct bs_certification {
    std::vector<bs_point_report> points;
    double fitted_c0 = 0.0;  // smallest c0 making every sample pass
    double min_margin = 0.0;
    bool all_within = false;
    double omega_sup = 0.0;
    double k0 = 0.0;
};

// Solve for the stream function on the given disk, probe the velocity at
// each sample, extract remainders, and fit the smallest constant making all
// bounds hold. Samples must lie in the open first quadrant with |x| <= 1/2.
bs_certification certify_bs_law(const scalar_field& omega, const disk_spec& disk,
                                const std::vector<vec2>& sample_points, double k0);

}  // namespace capssc
