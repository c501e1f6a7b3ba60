#include "capssc/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace capssc {

double threshold_time(double epsilon, double eta) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    if (!(eta > 0.0) || eta >= 1.0) throw std::invalid_argument("eta must lie in (0, 1)");
    return std::abs(std::log(eta / 4.0)) / epsilon;
}

const char* box_edge_name(box_edge e) {
    switch (e) {
        case box_edge::top: return "top";
        case box_edge::right: return "right";
        case box_edge::bottom: return "bottom";
        case box_edge::left: return "left";
        default: return "none";
    }
}

trajectory_tracker::trajectory_tracker(trajectory_series header) : data_(std::move(header)) {
    phi_ = data_.phi0;
}

void trajectory_tracker::seed(sim_state& s) {
    s.refresh_velocity();
    trajectory_sample row;
    row.t = s.time;
    row.phi = phi_;
    row.log_product = std::log(phi_.x) + std::log(phi_.y);
    row.omega_along = s.omega.sample(phi_.x, phi_.y);
    row.u_at = s.table->cartesian_velocity(phi_);
    data_.samples.push_back(row);
    prev_time_ = s.time;
    seeded_ = true;
}

void trajectory_tracker::observe(sim_state& after, const step_fields& f) {
    if (!seeded_) throw std::logic_error("trajectory tracker used before seeding");
    if (data_.exited) return;
    const double dt = after.time - prev_time_;
    prev_time_ = after.time;

    // classical RK4 through the step's sampled velocity fields
    const vec2 k1 = f.u_start->cartesian_velocity(phi_);
    const vec2 k2 = f.u_half->cartesian_velocity(phi_ + k1 * (0.5 * dt));
    const vec2 k3 = f.u_half->cartesian_velocity(phi_ + k2 * (0.5 * dt));
    const vec2 k4 = f.u_end->cartesian_velocity(phi_ + k3 * dt);
    const vec2 prev = phi_;
    phi_ = phi_ + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);

    // exit detection against the closed box [0, box_half]^2: pick the edge
    // crossed earliest along the segment
    const double b = data_.box_half;
    double first_frac = 2.0;
    box_edge edge = box_edge::none;
    auto consider = [&](double from, double to, double limit, box_edge e, bool upper) {
        const bool crossed = upper ? (to > limit) : (to < limit);
        if (!crossed) return;
        const double denom = to - from;
        const double frac = denom == 0.0 ? 0.0 : (limit - from) / denom;
        if (frac < first_frac) {
            first_frac = frac;
            edge = e;
        }
    };
    consider(prev.y, phi_.y, b, box_edge::top, true);
    consider(prev.x, phi_.x, b, box_edge::right, true);
    consider(prev.y, phi_.y, 0.0, box_edge::bottom, false);
    consider(prev.x, phi_.x, 0.0, box_edge::left, false);
    if (edge != box_edge::none) {
        data_.exited = true;
        data_.edge = edge;
        data_.exit_time = after.time - dt + first_frac * dt;
    }

    trajectory_sample row;
    row.t = after.time;
    row.phi = phi_;
    row.log_product = std::log(std::max(phi_.x, 1e-300)) + std::log(std::max(phi_.y, 1e-300));
    row.omega_along = after.omega.sample(phi_.x, phi_.y);
    row.u_at = f.u_end->cartesian_velocity(phi_);
    data_.samples.push_back(row);
}

double axis_gradient_at(const quarter_grid& omega, double eta) {
    double worst = 0.0;
    const double lim = 0.5 * eta;
    for (int j = 1; j * omega.spacing < lim && j < omega.n; ++j) {
        worst = std::max(worst, std::abs(one_sided_dx_at_axis(omega, j)));
    }
    return worst;
}

growth_collector::growth_collector(double box_half, double eta) : box_hi_(2.0 * box_half), eta_(eta) {}

void growth_collector::observe(const sim_state& s) {
    growth_sample g;
    g.t = s.time;
    const box_sups sups = sup_derivatives_box(s.omega, box_hi_, box_hi_);
    g.sup_grad = sups.grad;
    g.sup_hess = sups.hess;
    g.axis_raw = axis_gradient_at(s.omega, eta_);
    series_.push_back(g);
}

growth_report analyze_growth(const std::vector<growth_sample>& series, double epsilon, double box_hi,
                             double window_end) {
    growth_report rep;
    rep.series = series;
    rep.box_hi = box_hi;
    if (series.empty()) return rep;

    std::vector<growth_sample> window;
    for (const growth_sample& g : series)
        if (g.t <= window_end + 1e-12) window.push_back(g);
    if (window.size() < 4) return rep;

    // gradient-threshold dichotomy: the window sup against the fixed bound
    // 2 eps e^{eps T} at the analysis horizon
    rep.flag = growth_case::case2;
    const double grad_threshold = 2.0 * epsilon * std::exp(epsilon * window_end);
    for (const growth_sample& g : window) {
        if (g.sup_grad > grad_threshold) {
            rep.flag = growth_case::case1;
            rep.case1_time = g.t;
            break;
        }
    }

    const double t0 = window.front().t;
    const double span = window.back().t - t0;
    rep.transient_end = t0 + 0.1 * span;

    rep.monotone_after_transient = true;
    double prev = -1.0;
    for (const growth_sample& g : window) {
        if (g.t < rep.transient_end) continue;
        if (prev >= 0.0 && g.sup_hess < prev * (1.0 - 1e-10)) {
            rep.monotone_after_transient = false;
            break;
        }
        prev = g.sup_hess;
    }

    // least-squares exponential fit of sup_hess past the transient
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    long n = 0;
    for (const growth_sample& g : window) {
        if (g.t < rep.transient_end || g.sup_hess <= 0.0) continue;
        const double y = std::log(g.sup_hess);
        sx += g.t;
        sy += y;
        sxx += g.t * g.t;
        sxy += g.t * y;
        ++n;
    }
    if (n >= 2) {
        const double denom = n * sxx - sx * sx;
        if (denom != 0.0) rep.fit_rate = (n * sxy - sx * sy) / denom / epsilon;
    }
    return rep;
}

double axis_gradient_normalized_max(const std::vector<growth_sample>& series, double window_end) {
    double max_axis = 0.0, max_grad = 0.0;
    for (const growth_sample& g : series) {
        if (g.t > window_end + 1e-12) break;
        max_axis = std::max(max_axis, g.axis_raw);
        max_grad = std::max(max_grad, g.sup_grad);
    }
    return max_grad > 0.0 ? max_axis / max_grad : 0.0;
}

transported_check transported_value_check(const trajectory_series& traj) {
    if (traj.samples.empty()) throw std::invalid_argument("trajectory has no samples");
    transported_check out;
    out.omega0_at_start = traj.samples.front().omega_along;
    const double ref = std::abs(out.omega0_at_start);
    for (const trajectory_sample& s : traj.samples) {
        if (ref > 0.0) out.max_drift = std::max(out.max_drift, std::abs(s.omega_along - out.omega0_at_start) / ref);
    }
    const double et = traj.epsilon * traj.t_horizon;
    const double z = std::exp(-et);
    const double w = std::exp(-traj.a_exponent * et);
    const double s3 = std::sin(z);
    out.c2_formula = s3 * s3 * s3 * std::sin(w) * std::exp((3.0 + traj.a_exponent) * et);
    return out;
}

drift_report hyperbola_drift(const trajectory_series& traj) {
    const auto& s = traj.samples;
    const double t_end = traj.exited ? traj.exit_time : std::numeric_limits<double>::infinity();
    std::size_t pre = 0;
    while (pre < s.size() && s[pre].t <= t_end + 1e-12) ++pre;
    if (pre < 3) throw std::invalid_argument("need at least three trajectory samples before exit");

    drift_report rep;
    double sumsq = 0.0;
    long n = 0;
    for (std::size_t i = 1; i + 1 < pre; ++i) {
        const double rate = (s[i + 1].log_product - s[i - 1].log_product) / (s[i + 1].t - s[i - 1].t);
        rep.sup_rate = std::max(rep.sup_rate, std::abs(rate));
        sumsq += rate * rate;
        ++n;
    }
    rep.rms_rate = n > 0 ? std::sqrt(sumsq / n) : 0.0;
    rep.implied_2c2 = rep.sup_rate / traj.epsilon;
    rep.fitted_2c2_rms = rep.rms_rate / traj.epsilon;

    if (traj.exited && traj.edge == box_edge::top) {
        rep.exit_bound_checked = true;
        const trajectory_sample& last = s[pre - 1];
        rep.exit_log_phi1 = std::log(std::max(last.phi.x, 1e-300));
        rep.exit_log_phi1_cap =
            rep.implied_2c2 * traj.epsilon * traj.exit_time - traj.a_exponent * traj.epsilon * traj.t_horizon;
        rep.exit_bound_ok = rep.exit_log_phi1 <= rep.exit_log_phi1_cap + 0.05 * std::abs(rep.exit_log_phi1_cap);
    }
    return rep;
}

sign_margin_report sign_bounds_check(const trajectory_series& traj, double eta) {
    if (!(eta > 0.0) || eta >= 1.0) throw std::invalid_argument("eta must lie in (0, 1)");
    sign_margin_report rep;
    const double log_inv_eta = std::log(1.0 / eta);
    const double t_end = traj.exited ? traj.exit_time : std::numeric_limits<double>::infinity();

    rep.worst_m1 = -std::numeric_limits<double>::infinity();
    rep.worst_m2 = std::numeric_limits<double>::infinity();
    for (const trajectory_sample& s : traj.samples) {
        if (s.t > t_end + 1e-12) break;
        if (s.phi.x <= 0.0 || s.phi.y <= 0.0) continue;
        const double m1 = s.u_at.x / (s.phi.x * traj.epsilon * log_inv_eta);
        const double m2 = s.u_at.y / (s.phi.y * traj.epsilon * log_inv_eta);
        rep.worst_m1 = std::max(rep.worst_m1, m1);
        rep.worst_m2 = std::min(rep.worst_m2, m2);
        if (m1 > -1.0 / 48.0 || m2 < 1.0 / 48.0) rep.violation_times.push_back(s.t);
    }

    rep.t_star_bound = 48.0 / log_inv_eta * (traj.a_exponent - 1.0) * traj.t_horizon;
    if (traj.exited) {
        rep.t_star = traj.exit_time;
        rep.t_star_ok = rep.t_star <= rep.t_star_bound + 1e-9;
    }
    return rep;
}

tracked_run_result run_tracked(sim_state initial, const tracked_run_options& opts) {
    if (!(opts.t_horizon > 0.0)) throw std::invalid_argument("tracked run needs a positive horizon");

    const double et = opts.epsilon * opts.t_horizon;
    trajectory_series header;
    header.phi0 = {std::exp(-et), std::exp(-opts.a_exponent * et)};
    header.box_half = std::exp(-et);
    header.epsilon = opts.epsilon;
    header.a_exponent = opts.a_exponent;
    header.t_horizon = opts.t_horizon;

    const double h = initial.omega.spacing;
    if (!(h < header.phi0.y / 4.0)) {
        const int needed = static_cast<int>(std::ceil(8.0 / header.phi0.y)) + 1;
        std::ostringstream msg;
        msg << "tracked point " << header.phi0.y << " is not grid-resolvable at spacing " << h
            << "; need a quarter grid of side at least " << needed;
        throw std::runtime_error(msg.str());
    }

    const double log_inv_eta = std::log(1.0 / opts.eta);
    const double default_cap = 48.0 / log_inv_eta * (opts.a_exponent - 1.0) * opts.t_horizon;
    const double cap = opts.t_cap > 0.0 ? opts.t_cap : default_cap;

    tracked_run_result out;
    out.state = std::move(initial);
    sim_state& s = out.state;
    s.refresh_velocity();

    trajectory_tracker tracker(header);
    tracker.seed(s);
    growth_collector growth(header.box_half, opts.eta);
    growth.observe(s);
    if (s.ledger.empty()) {
        const field_norms nw = norms(s.omega);
        s.ledger.push_back({s.time, nw.sup, nw.l1, nw.l2, kinetic_from_table(*s.table)});
    }

    std::ostream& log = opts.log ? *opts.log : std::cout;
    std::size_t next_snap = 0;

    while (s.time < cap - 1e-12) {
        s.refresh_velocity();
        double dt = s.max_speed > 1e-14 ? opts.cfl * h / s.max_speed : cap - s.time;
        dt = std::min(dt, cap - s.time);
        if (next_snap < opts.snapshot_times.size())
            dt = std::min(dt, std::max(opts.snapshot_times[next_snap] - s.time, 1e-6));

        const step_fields fields = step(s, dt);
        for (double v : s.omega.values) {
            if (!std::isfinite(v)) {
                std::ostringstream msg;
                msg << "non-finite vorticity at step " << s.step_index << ", t = " << s.time;
                throw std::runtime_error(msg.str());
            }
        }

        tracker.observe(s, fields);
        growth.observe(s);

        if (next_snap < opts.snapshot_times.size() && s.time >= opts.snapshot_times[next_snap] - 1e-9) {
            if (opts.on_snapshot) opts.on_snapshot(s);
            ++next_snap;
        }

        if (!opts.quiet && opts.progress_interval > 0 && s.step_index % opts.progress_interval == 0) {
            const trajectory_sample& p = tracker.series().samples.back();
            log << "step " << s.step_index << "  t=" << s.time << "  phi=(" << p.phi.x << ", " << p.phi.y
                << ")  sup|w|=" << s.ledger.back().sup << '\n';
        }

        if (tracker.exited() && opts.stop_after_exit &&
            next_snap >= opts.snapshot_times.size())
            break;
    }

    out.traj = tracker.series();
    out.growth = growth.series();
    out.box_hi = growth.box_hi();
    return out;
}

}  // namespace capssc
