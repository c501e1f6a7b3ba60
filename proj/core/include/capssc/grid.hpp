#pragma once

#include <vector>

#include "capssc/point.hpp"

namespace capssc {

enum class axis_parity { odd, even };

// One stored quadrant of a field on [0, extent]^2; values at negative
// coordinates are reconstructed through the per-axis reflection parity, and
// accesses beyond the stored extent read as zero (fields here are compactly
// supported inside the quadrant). Node (i,j) sits at (i*spacing, j*spacing).
struct quarter_grid {
    int n = 0;
    double spacing = 0.0;
    axis_parity parity_x = axis_parity::odd;
    axis_parity parity_y = axis_parity::odd;
    std::vector<double> values;

    quarter_grid() = default;
    quarter_grid(int n_side, double extent, axis_parity px = axis_parity::odd,
                 axis_parity py = axis_parity::odd)
        : n(n_side),
          spacing(extent / static_cast<double>(n_side - 1)),
          parity_x(px),
          parity_y(py),
          values(static_cast<std::size_t>(n_side) * n_side, 0.0) {}

    double extent() const { return spacing * (n - 1); }
    double& at(int i, int j) { return values[static_cast<std::size_t>(j) * n + i]; }
    double at(int i, int j) const { return values[static_cast<std::size_t>(j) * n + i]; }

    // reflected / zero-padded node access for any integer index
    double value(int i, int j) const {
        double s = 1.0;
        if (i < 0) {
            i = -i;
            if (parity_x == axis_parity::odd) s = -s;
        }
        if (j < 0) {
            j = -j;
            if (parity_y == axis_parity::odd) s = -s;
        }
        if (i >= n || j >= n) return 0.0;
        return s * values[static_cast<std::size_t>(j) * n + i];
    }

    // bicubic (Catmull-Rom) interpolation; valid for any (x,y), using the
    // reflection rule across the axes and zero padding beyond the extent
    double sample(double x, double y) const;

    // bicubic clipped to the min/max of the surrounding cell's corner nodes;
    // used by advection to keep transported values inside local bounds
    double sample_monotone(double x, double y) const;

    // exact zeros on the axes for odd parities (representation-level symmetry)
    void enforce_axis_parity();
};

// 4th-order centered stencils with reflected access
vec2 gradient_at(const quarter_grid& g, int i, int j);
double hessian_frobenius_at(const quarter_grid& g, int i, int j);

// one-sided 4th-order d/dx at x = 0 into the stored quadrant, at row j
double one_sided_dx_at_axis(const quarter_grid& g, int j);

struct box_sups {
    double grad = 0.0;
    double hess = 0.0;
};
// sup of |grad| and Hessian (Frobenius) over nodes in [0,xmax]x[0,ymax]
box_sups sup_derivatives_box(const quarter_grid& g, double xmax, double ymax);

struct field_norms {
    double sup = 0.0;
    double l1 = 0.0;
    double l2 = 0.0;
};
// full-domain norms reconstructed from the quadrant by symmetry (trapezoid
// weights; deterministic row-partial reduction)
field_norms norms(const quarter_grid& g);

}  // namespace capssc
