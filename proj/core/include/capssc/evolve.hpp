#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <stdexcept>
#include <vector>

#include "capssc/disk_poisson.hpp"
#include "capssc/grid.hpp"
#include "capssc/point.hpp"

namespace capssc {

// thrown when a requested step violates the CFL budget
struct cfl_error : std::runtime_error {
    double suggested_dt;
    cfl_error(const std::string& what, double suggested) : std::runtime_error(what), suggested_dt(suggested) {}
};

struct conservation_entry {
    double time = 0.0;
    double sup = 0.0;
    double l1 = 0.0;
    double l2 = 0.0;
    double kinetic = 0.0;
};

// Vorticity state on the quarter grid plus the cached stream solve of the
// advecting field. The advecting velocity is (d2 psi, -d1 psi): the
// clockwise-for-positive-vorticity orientation, the negative of
// velocity_from_stream. refresh_velocity() bakes that sign into the cached
// stream so probes and tables agree with what the stepper uses.
struct sim_state {
    quarter_grid omega{16, 2.0, axis_parity::odd, axis_parity::odd};
    double time = 0.0;
    long step_index = 0;
    disk_spec solver{2.0, 768, 1024};
    double cfl_limit = 0.5;
    std::vector<conservation_entry> ledger;

    std::shared_ptr<const stream_solution> stream;  // advecting orientation
    std::shared_ptr<const polar_velocity> table;
    double max_speed = 0.0;

    void refresh_velocity();   // solve for the current omega if stale
    void invalidate_cache();   // drop stream/table after omega edits
};

// velocity fields actually used across one step, for synchronized
// trajectory integration: start-of-step, midpoint average, and the
// corrector's end-of-step approximation
struct step_fields {
    std::shared_ptr<const polar_velocity> u_start;
    std::shared_ptr<const polar_velocity> u_half;
    std::shared_ptr<const polar_velocity> u_end;
};

// One semi-Lagrangian step: backward RK3 characteristic traces through the
// frozen start field (predictor), velocity refresh from the predicted
// vorticity, and a retrace through the time-centered average (corrector).
// Interpolation is clipped bicubic with odd reflection across the axes and
// zero extension outside the grid. Throws cfl_error when dt max|u| / h
// exceeds the state's cfl_limit.
step_fields step(sim_state& s, double dt);

// probe the advecting velocity at off-grid points; throws when a point
// leaves the closed disk
std::vector<vec2> velocity_probe(sim_state& s, const std::vector<vec2>& points);

// kinetic energy (1/2) integral |u|^2 from a polar table (trapezoid radial,
// uniform angular weights)
double kinetic_from_table(const polar_velocity& tab);

struct run_options {
    double t_end = 0.0;
    double cfl = 0.5;
    double fixed_dt = 0.0;  // > 0 forces a constant step
    long progress_interval = 25;
    long checkpoint_interval = 0;  // steps, 0 disables
    bool quiet = false;
    std::ostream* log = nullptr;  // defaults to std::cout
};

struct run_hooks {
    // called after every accepted step with the fields that produced it
    std::function<void(sim_state&, const step_fields&)> after_step;
    std::function<void(const sim_state&)> checkpoint;
};

// Drive the state to t_end, appending one ledger entry per step, emitting
// progress lines, and invoking hooks. Aborts with std::runtime_error on
// non-finite vorticity.
void run(sim_state& s, const run_options& opts, const run_hooks& hooks = {});

}  // namespace capssc
