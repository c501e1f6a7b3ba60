#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "capssc/grid.hpp"
#include "capssc/point.hpp"

namespace capssc {

struct disk_spec {
    double radius = 2.0;
    int n_radial = 128;   // radial cells; nodes 0..n_radial include r=0 and r=R
    int n_angular = 256;  // power of two, >= 32

    void validate() const;  // throws std::invalid_argument on bad sizes
    double dr() const { return radius / n_radial; }
    double dtheta() const;
};

// reflected source across the circle |y| = R
vec2 image_point(vec2 y, double R);

// Dirichlet Green's function of the disk of radius R (image form); y = 0 is
// the log(|x|/R) limit; x == y throws
double green_function(vec2 x, vec2 y, double R);

// gradient of the Green's function in the first argument
vec2 green_gradient_x(vec2 x, vec2 y, double R);

// velocity contribution at x of the unit odd-odd source quartet located at
// y (signs +,-,-,+ at (y1,y2), (-y1,y2), (y1,-y2), (-y1,-y2)): the sum of
// grad-perp Green's gradients over the four reflected sources
vec2 symmetrized_velocity_kernel(vec2 x, vec2 y, double R);

// Stream function as angular Fourier modes psi_m(r_j) on uniform radial
// nodes. Mode arrays follow the unnormalized forward-FFT scaling; pointwise
// reconstruction applies the 1/n_angular factor.
struct stream_solution {
    disk_spec disk;
    double time_tag = 0.0;
    std::vector<std::vector<std::complex<double>>> psi;   // [m][j], m = 0..n_angular/2
    std::vector<std::vector<std::complex<double>>> dpsi;  // radial derivative, same shape

    double psi_at(vec2 p) const;
    // standard orientation u = (-d2 psi, d1 psi)
    vec2 velocity(vec2 p) const;
};

// Dirichlet Poisson solve Delta psi = omega on the disk: FFT in the angle,
// second-order radial tridiagonal boundary-value solve per mode (pole closed
// by the parity rule: psi_m(0) = 0 for m >= 1, four-point pole equation for
// m = 0). Direct solve: the discrete residual is roundoff-level.
stream_solution poisson_solve(const std::function<double(vec2)>& omega, const disk_spec& disk);
stream_solution poisson_solve(const quarter_grid& omega, const disk_spec& disk);

std::vector<vec2> velocity_from_stream(const stream_solution& s, const std::vector<vec2>& points);

// (u_r, u_theta) tables on the full polar grid for fast whole-grid
// resampling; rows j = 0..n_radial, columns k = 0..n_angular-1
struct polar_velocity {
    disk_spec disk;
    std::vector<double> u_r;
    std::vector<double> u_th;

    double at_r(int j, int k) const { return u_r[static_cast<std::size_t>(j) * disk.n_angular + k]; }
    double at_th(int j, int k) const { return u_th[static_cast<std::size_t>(j) * disk.n_angular + k]; }
    // bicubic in (r, theta); zero outside the disk
    vec2 cartesian_velocity(vec2 p) const;
};
polar_velocity velocity_table(const stream_solution& s);

}  // namespace capssc
