#include "capssc/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>

#include "capssc/parallel.hpp"

namespace capssc {

namespace {

// flip the stream sign so velocity() yields (d2 psi, -d1 psi): positive
// vorticity then drives the contract-in-x1 / expand-in-x2 saddle that the
// odd-odd setup studies
void flip_orientation(stream_solution& sol) {
    for (auto& mode : sol.psi)
        for (auto& v : mode) v = -v;
    for (auto& mode : sol.dpsi)
        for (auto& v : mode) v = -v;
}

double table_max_speed(const polar_velocity& tab) {
    const std::size_t n = tab.u_r.size();
    double m2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double s2 = tab.u_r[i] * tab.u_r[i] + tab.u_th[i] * tab.u_th[i];
        m2 = std::max(m2, s2);
    }
    return std::sqrt(m2);
}

quarter_grid trace_advect(const quarter_grid& src, const polar_velocity& v, double dt) {
    quarter_grid dst(src.n, src.extent(), src.parity_x, src.parity_y);
    const double h = src.spacing;
    parallel_for(src.n, [&](long i) {
        if (i == 0) return;  // odd axis stays zero
        for (int j = 1; j < src.n; ++j) {
            const vec2 p{i * h, j * h};
            // backward characteristic: dX/ds = -v(X) over [0, dt], frozen v
            const vec2 k1 = v.cartesian_velocity(p) * -1.0;
            const vec2 k2 = v.cartesian_velocity(p + k1 * dt) * -1.0;
            const vec2 k3 = v.cartesian_velocity(p + (k1 + k2) * (0.25 * dt)) * -1.0;
            const vec2 x = p + (k1 + k2 + k3 * 4.0) * (dt / 6.0);
            dst.at(static_cast<int>(i), j) = src.sample_monotone(x.x, x.y);
        }
    });
    dst.enforce_axis_parity();
    return dst;
}

std::shared_ptr<const polar_velocity> average_tables(const polar_velocity& a, const polar_velocity& b) {
    auto out = std::make_shared<polar_velocity>(a);
    for (std::size_t i = 0; i < out->u_r.size(); ++i) {
        out->u_r[i] = 0.5 * (a.u_r[i] + b.u_r[i]);
        out->u_th[i] = 0.5 * (a.u_th[i] + b.u_th[i]);
    }
    return out;
}

std::pair<std::shared_ptr<const stream_solution>, std::shared_ptr<const polar_velocity>> solve_advecting(
    const quarter_grid& omega, const disk_spec& solver) {
    auto sol = std::make_shared<stream_solution>(poisson_solve(omega, solver));
    flip_orientation(*sol);
    auto tab = std::make_shared<polar_velocity>(velocity_table(*sol));
    return {sol, tab};
}

}  // namespace

void sim_state::refresh_velocity() {
    if (stream && table) return;
    auto [sol, tab] = solve_advecting(omega, solver);
    stream = sol;
    table = tab;
    max_speed = table_max_speed(*table);
}

void sim_state::invalidate_cache() {
    stream.reset();
    table.reset();
    max_speed = 0.0;
}

double kinetic_from_table(const polar_velocity& tab) {
    const int nr = tab.disk.n_radial;
    const int nt = tab.disk.n_angular;
    const double dr = tab.disk.dr();
    const double dth = tab.disk.dtheta();
    double total = 0.0;
    for (int j = 0; j <= nr; ++j) {
        const double r = j * dr;
        const double wj = (j == 0 || j == nr) ? 0.5 : 1.0;
        double ring = 0.0;
        const std::size_t base = static_cast<std::size_t>(j) * nt;
        for (int k = 0; k < nt; ++k) {
            ring += tab.u_r[base + k] * tab.u_r[base + k] + tab.u_th[base + k] * tab.u_th[base + k];
        }
        total += 0.5 * wj * r * ring * dr * dth;
    }
    return total;
}

step_fields step(sim_state& s, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("step size must be positive");
    s.refresh_velocity();

    const double h = s.omega.spacing;
    if (dt * s.max_speed / h > s.cfl_limit * (1.0 + 1e-12)) {
        const double suggested = s.cfl_limit * h / s.max_speed;
        std::ostringstream msg;
        msg << "step rejected: dt " << dt << " exceeds the CFL budget " << s.cfl_limit << " (max speed "
            << s.max_speed << ", spacing " << h << "); use dt <= " << suggested;
        throw cfl_error(msg.str(), suggested);
    }

    step_fields fields;
    fields.u_start = s.table;

    // predictor: trace through the frozen start-of-step field
    const quarter_grid predicted = trace_advect(s.omega, *fields.u_start, dt);

    // corrector velocity: refresh from the predicted vorticity, then use
    // the time-centered average for the final trace
    auto [sol_end, tab_end] = solve_advecting(predicted, s.solver);
    fields.u_end = tab_end;
    fields.u_half = average_tables(*fields.u_start, *tab_end);

    s.omega = trace_advect(s.omega, *fields.u_half, dt);
    s.time += dt;
    s.step_index += 1;
    s.invalidate_cache();

    const field_norms nw = norms(s.omega);
    s.ledger.push_back({s.time, nw.sup, nw.l1, nw.l2, kinetic_from_table(*tab_end)});
    (void)sol_end;
    return fields;
}

std::vector<vec2> velocity_probe(sim_state& s, const std::vector<vec2>& points) {
    s.refresh_velocity();
    for (const vec2& p : points) {
        if (norm(p) > s.solver.radius + 1e-12)
            throw std::domain_error("velocity probe outside the closed disk");
    }
    std::vector<vec2> out(points.size());
    parallel_for(static_cast<long>(points.size()), [&](long i) {
        out[static_cast<std::size_t>(i)] = s.stream->velocity(points[static_cast<std::size_t>(i)]);
    });
    return out;
}

void run(sim_state& s, const run_options& opts, const run_hooks& hooks) {
    std::ostream& log = opts.log ? *opts.log : std::cout;
    s.refresh_velocity();
    if (s.ledger.empty()) {
        const field_norms nw = norms(s.omega);
        s.ledger.push_back({s.time, nw.sup, nw.l1, nw.l2, kinetic_from_table(*s.table)});
    }

    const double h = s.omega.spacing;
    while (s.time < opts.t_end - 1e-12) {
        s.refresh_velocity();
        double dt;
        if (opts.fixed_dt > 0.0) {
            dt = opts.fixed_dt;
        } else if (s.max_speed > 1e-14) {
            dt = opts.cfl * h / s.max_speed;
        } else {
            dt = opts.t_end - s.time;
        }
        dt = std::min(dt, opts.t_end - s.time);

        const step_fields fields = step(s, dt);

        bool finite = true;
        for (double v : s.omega.values) {
            if (!std::isfinite(v)) {
                finite = false;
                break;
            }
        }
        if (!finite) {
            if (hooks.checkpoint) hooks.checkpoint(s);
            std::ostringstream msg;
            msg << "non-finite vorticity at step " << s.step_index << ", t = " << s.time;
            throw std::runtime_error(msg.str());
        }

        if (hooks.after_step) hooks.after_step(s, fields);
        if (hooks.checkpoint && opts.checkpoint_interval > 0 && s.step_index % opts.checkpoint_interval == 0)
            hooks.checkpoint(s);

        if (!opts.quiet && opts.progress_interval > 0 &&
            (s.step_index % opts.progress_interval == 0 || s.time >= opts.t_end - 1e-12)) {
            const conservation_entry& e = s.ledger.back();
            log << "step " << s.step_index << "  t=" << s.time << "  dt=" << dt << "  sup|w|=" << e.sup
                << "  K=" << e.kinetic << '\n';
        }
    }
}

}  // namespace capssc
