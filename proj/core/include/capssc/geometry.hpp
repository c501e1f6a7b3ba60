#pragma once

#include <random>
#include <vector>

#include "capssc/point.hpp"

namespace capssc {

// Closed Jordan polyline, positively oriented. Construction validates vertex
// count, consecutive-vertex distinctness, orientation, and (optionally, it is
// O(n^2)) simplicity; generators that are simple by construction may skip the
// segment-pair test.
struct planar_curve {
    std::vector<vec2> vertices;

    explicit planar_curve(std::vector<vec2> verts, bool check_simple = true);
};

double curve_length(const planar_curve& c);
double enclosed_area(const planar_curve& c);

struct circle {
    vec2 center;
    double radius = 0.0;
};

// smallest enclosing circle of the vertex set (randomized incremental,
// expected O(n))
circle circumcircle(const planar_curve& c);

// largest inscribed circle: interior distance-lattice maximization with local
// pattern-search refinement; radius accurate to the final pattern pitch for
// the basin found, global up to the coarse lattice pitch
circle incircle(const planar_curve& c);

struct curve_metrics {
    double length = 0.0;
    double area = 0.0;
    double circumradius = 0.0;
    double inradius = 0.0;
    double deficit = 0.0;        // L^2 - 4*pi*A
    double bonnesen_rhs = 0.0;   // pi^2 (R - rho)
    bool satisfied = false;      // deficit >= bonnesen_rhs - tol
};
inline constexpr double bonnesen_tolerance = 1e-6;
curve_metrics bonnesen_check(const planar_curve& c);

struct annulus_certificate {
    double delta = 0.0;
    double inner_radius = 0.0;   // 2 - 27*delta/pi
    double outer_radius = 0.0;   // 2 + 9*delta/pi
    bool contained = false;      // all vertices inside the closed annulus
    double r_minus_rho = 0.0;
    double deficiency_bound = 0.0;  // 9*delta/pi
    bool deficiency_ok = false;     // r_minus_rho < bound + 1e-4
};
annulus_certificate annulus_certify(const planar_curve& c, double delta);

// max over the two axis reflections of the directed vertex-to-curve
// Hausdorff distance; 0 means reflective symmetry about both axes
double reflective_symmetry_defect(const planar_curve& c);

// --- property-suite generators -------------------------------------------

// convex hull of n_pts uniform points in [-box_half, box_half]^2
planar_curve random_convex_polygon(std::mt19937_64& rng, int min_pts = 8, int max_pts = 64,
                                   double box_half = 2.0);

// 2-fold reflective symmetric perturbed circle: radial cosine modes {2,4,6}
// with random signed amplitudes, rescaled to area 4*pi, amplitudes chosen by
// bisection so the length excess L - 4*pi equals budget_fraction * delta
planar_curve random_symmetric_curve(std::mt19937_64& rng, double delta, double budget_fraction,
                                    int n_vertices = 2048);

// distance from p to the boundary polyline (helper shared with tests)
double distance_to_curve(const planar_curve& c, vec2 p);
bool point_inside_curve(const planar_curve& c, vec2 p);

}  // namespace capssc
