#pragma once

#include <functional>
#include <vector>

#include "capssc/biot_savart.hpp"
#include "capssc/disk_poisson.hpp"
#include "capssc/point.hpp"

namespace capssc {

using velocity_field = std::function<vec2(vec2)>;

// difference e = u - U between a supplied velocity and the fixed-disk
// solve on radius sqrt(2) for the same vorticity
struct error_field {
    velocity_field eval;           // e(x), valid on the sqrt(2) disk
    std::vector<vec2> probes;      // probe grid inside B_{1/2}
    std::vector<vec2> samples;     // e at the probes
    double div_residual = 0.0;     // max |div e| over interior probes
    double curl_residual = 0.0;    // max |curl e| over interior probes
    double stream_l2 = 0.0;        // ||grad F||_{L2}, F the stream of e
    double k0 = 0.0;
};

// Build e = u_full - U where U solves the Dirichlet problem for omega on
// the sqrt(2) disk. Probes are checked for vanishing divergence and curl
// (harmonic components). stream_l2 is measured by quadrature of |e|^2.
error_field build_error_field(const velocity_field& u_full, const scalar_field& omega, double k0,
                              int n_radial = 256, int n_angular = 512);

struct c1_check {
    double measured_c1 = 0.0;  // sup |grad e| over B_{1/2}
    double ratio = 0.0;        // measured / sqrt(k0)
};
// dense finite-difference sup of the velocity gradient on B_{1/2};
// throws when k0 = 0 but the field is not identically zero
c1_check c1_bound_check(const error_field& e);

// worst |e_j(x)| / (sqrt(k0) |x_j|) over probes with |x_j| >= 1e-4; throws
// when the axis traces e_1(0, x2), e_2(x1, 0) exceed 1e-8 (symmetry defect)
double odd_pointwise_check(const error_field& e);

// max deviation of each component from its small-circle average (harmonic
// mean-value property), over the stored probes
double mean_value_residual(const error_field& e, double circle_radius = 0.02, int n_samples = 64);

// integral of grad_a . grad_b over the disk of the given radius (polar
// trapezoid-midpoint product rule)
double h1_inner_product(const velocity_field& grad_a, const velocity_field& grad_b, double radius,
                        int n_r = 192, int n_th = 256);

// Harmonic stream with both reflection symmetries odd: F = Im sum_m c_m
// (z / R)^m over even m = 2, 4, ..., the Poisson-kernel extension of
// odd-odd trigonometric boundary data. Closed forms throughout.
struct harmonic_stream {
    std::vector<double> coef;  // coefficient of m = 2, 4, 6, ...
    double radius = bs_law_radius;

    double value(vec2 p) const;
    vec2 grad(vec2 p) const;
    vec2 grad_perp(vec2 p) const;  // (-d2 F, d1 F)
    double grad_l2() const;        // ||grad F||_{L2(B_R)} = sqrt(sum pi m c_m^2)
    void normalize_grad_l2();      // rescale coefficients so grad_l2() = 1
};

}  // namespace capssc
