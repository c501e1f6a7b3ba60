#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>
#include <sstream>

#include "capssc/diagnostics.hpp"

using namespace capssc;

namespace {

double smooth01(double s) {
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    return s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

// hand-filled polar table of an analytic velocity field
std::shared_ptr<polar_velocity> make_table(const disk_spec& disk, vec2 (*u)(vec2)) {
    auto tab = std::make_shared<polar_velocity>();
    tab->disk = disk;
    const int nr = disk.n_radial, nt = disk.n_angular;
    tab->u_r.assign(static_cast<std::size_t>(nr + 1) * nt, 0.0);
    tab->u_th.assign(static_cast<std::size_t>(nr + 1) * nt, 0.0);
    for (int j = 0; j <= nr; ++j) {
        const double r = j * disk.dr();
        for (int k = 0; k < nt; ++k) {
            const double th = k * disk.dtheta();
            const vec2 rhat{std::cos(th), std::sin(th)};
            const vec2 that{-rhat.y, rhat.x};
            const vec2 v = u({r * rhat.x, r * rhat.y});
            tab->u_r[static_cast<std::size_t>(j) * nt + k] = dot(v, rhat);
            tab->u_th[static_cast<std::size_t>(j) * nt + k] = dot(v, that);
        }
    }
    return tab;
}

// state whose cached velocity is the injected table; no solver involved
sim_state make_synthetic_state(std::shared_ptr<polar_velocity> tab) {
    sim_state s;
    s.omega = quarter_grid(257, 2.0, axis_parity::odd, axis_parity::odd);
    for (int j = 0; j < 257; ++j)
        for (int i = 0; i < 257; ++i)
            s.omega.at(i, j) = (i * s.omega.spacing) * (j * s.omega.spacing);
    s.omega.enforce_axis_parity();
    s.solver = tab->disk;
    s.stream = std::make_shared<stream_solution>();
    s.table = std::move(tab);
    return s;
}

// drive a tracker through a frozen analytic field with uniform steps
trajectory_series drive(vec2 (*u)(vec2), trajectory_series header, double dt, long max_steps,
                        bool stop_on_exit = true) {
    auto tab = make_table(disk_spec{2.0, 64, 512}, u);
    sim_state s = make_synthetic_state(tab);
    step_fields fields{tab, tab, tab};
    trajectory_tracker tracker(std::move(header));
    tracker.seed(s);
    for (long k = 0; k < max_steps; ++k) {
        s.time += dt;
        tracker.observe(s, fields);
        if (stop_on_exit && tracker.exited()) break;
    }
    return tracker.series();
}

vec2 saddle(vec2 p) { return {-p.x, p.y}; }
vec2 skew_saddle(vec2 p) { return {-p.x, 2.0 * p.y}; }
vec2 feeble_up(vec2 p) { return {-p.x, 0.001 * p.y}; }
vec2 down_right(vec2) { return {0.05, -0.3}; }
vec2 left_drift(vec2) { return {-0.3, 0.02}; }

trajectory_series saddle_header() {
    trajectory_series h;
    h.epsilon = 1.0;
    h.a_exponent = 2.0;
    h.t_horizon = 3.0;
    h.box_half = std::exp(-1.0 * h.t_horizon);
    h.phi0 = {std::exp(-1.0 * h.t_horizon), std::exp(-h.a_exponent * h.t_horizon)};
    return h;
}

}  // namespace

TEST_CASE("threshold time formula and guards") {
    CHECK(threshold_time(0.1, 0.04) == doctest::Approx(std::log(100.0) / 0.1).epsilon(1e-13));
    CHECK(threshold_time(0.2, 0.04) == doctest::Approx(0.5 * threshold_time(0.1, 0.04)).epsilon(1e-13));
    CHECK_THROWS(threshold_time(0.0, 0.5));
    CHECK_THROWS(threshold_time(0.1, 0.0));
    CHECK_THROWS(threshold_time(0.1, 1.0));
}

TEST_CASE("edge names") {
    CHECK(std::string(box_edge_name(box_edge::top)) == "top");
    CHECK(std::string(box_edge_name(box_edge::right)) == "right");
    CHECK(std::string(box_edge_name(box_edge::bottom)) == "bottom");
    CHECK(std::string(box_edge_name(box_edge::left)) == "left");
    CHECK(std::string(box_edge_name(box_edge::none)) == "none");
}

TEST_CASE("pure saddle: invariant product, top exit, transported value") {
    const auto traj = drive(saddle, saddle_header(), 0.005, 2000);

    REQUIRE(traj.samples.size() > 100);
    CHECK(traj.exited);
    CHECK(traj.edge == box_edge::top);
    // phi2 = e^{-6} e^{t} reaches e^{-3} at t = 3
    CHECK(traj.exit_time == doctest::Approx(3.0).epsilon(1e-3));

    const double lp0 = traj.samples.front().log_product;
    for (const auto& s : traj.samples) {
        if (traj.exited && s.t > traj.exit_time + 0.01) break;
        CHECK(std::abs(s.log_product - lp0) < 1e-6);
    }

    // the vorticity grid is x1 x2, the exact invariant of this flow
    const auto tv = transported_value_check(traj);
    CHECK(tv.omega0_at_start == doctest::Approx(traj.phi0.x * traj.phi0.y).epsilon(1e-10));
    CHECK(tv.max_drift < 1e-6);
    const double et = traj.epsilon * traj.t_horizon;
    const double z = std::exp(-et), w = std::exp(-traj.a_exponent * et);
    const double want_c2 = std::pow(std::sin(z), 3) * std::sin(w) * std::exp((3.0 + traj.a_exponent) * et);
    CHECK(tv.c2_formula == doctest::Approx(want_c2).epsilon(1e-12));

    // no drift in the hyperbola law, and the exit cap is saturated
    const auto dr = hyperbola_drift(traj);
    CHECK(dr.sup_rate < 1e-6);
    CHECK(dr.implied_2c2 < 1e-6);
    CHECK(dr.exit_bound_checked);
    CHECK(dr.exit_log_phi1 == doctest::Approx(-6.0).epsilon(2e-3));
    CHECK(dr.exit_bound_ok);

    // sign margins: u1/phi1 = -1, u2/phi2 = +1, normalized by eps log(1/eta)
    const double eta = 0.05;
    const auto sg = sign_bounds_check(traj, eta);
    const double m = 1.0 / std::log(1.0 / eta);
    CHECK(sg.worst_m1 == doctest::Approx(-m).epsilon(1e-6));
    CHECK(sg.worst_m2 == doctest::Approx(m).epsilon(1e-6));
    CHECK(sg.violation_times.empty());
    CHECK(sg.t_star == doctest::Approx(traj.exit_time).epsilon(1e-12));
    CHECK(sg.t_star_bound == doctest::Approx(48.0 / std::log(20.0) * 1.0 * 3.0).epsilon(1e-12));
    CHECK(sg.t_star_ok);
}

TEST_CASE("skewed saddle: unit drift rate measured exactly") {
    const auto traj = drive(skew_saddle, saddle_header(), 0.01, 2000);
    REQUIRE(traj.exited);
    CHECK(traj.edge == box_edge::top);
    // phi2 = e^{-6} e^{2t} hits e^{-3} at t = 1.5
    CHECK(traj.exit_time == doctest::Approx(1.5).epsilon(1e-3));

    const auto dr = hyperbola_drift(traj);
    // d/dt log(phi1 phi2) = -1 + 2 = 1; centered differences are exact up to
    // the O(dt^4) bias of the integrator's growth factor
    CHECK(dr.sup_rate == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(dr.rms_rate == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(dr.implied_2c2 == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(dr.fitted_2c2_rms == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(dr.exit_bound_checked);
    // cap = 2C2 eps T* - a eps T = 1.5 - 6 = -4.5 = log phi1 at exit
    CHECK(dr.exit_log_phi1_cap == doctest::Approx(1.0 * 1.5 - 2.0 * 3.0).epsilon(1e-3));
    CHECK(dr.exit_log_phi1 == doctest::Approx(-4.5).epsilon(5e-3));
    CHECK(dr.exit_bound_ok);
}

TEST_CASE("feeble upward velocity violates the sign law at every sample") {
    auto header = saddle_header();
    const auto traj = drive(feeble_up, header, 0.01, 50, false);
    CHECK_FALSE(traj.exited);
    const auto sg = sign_bounds_check(traj, 0.05);
    CHECK(sg.worst_m2 < 1.0 / 48.0);
    CHECK(sg.violation_times.size() == traj.samples.size());
    CHECK(std::isnan(sg.t_star));
    CHECK_FALSE(sg.t_star_ok);
    CHECK_THROWS(sign_bounds_check(traj, 1.5));
}

TEST_CASE("straight-line exits pick the correct edge and crossing time") {
    trajectory_series h;
    h.epsilon = 1.0;
    h.a_exponent = 2.0;
    h.t_horizon = 1.0;
    h.box_half = 0.5;

    h.phi0 = {0.2, 0.15};
    const auto bottom = drive(down_right, h, 0.01, 500);
    CHECK(bottom.exited);
    CHECK(bottom.edge == box_edge::bottom);
    CHECK(bottom.exit_time == doctest::Approx(0.5).epsilon(1e-6));

    h.phi0 = {0.15, 0.2};
    const auto left = drive(left_drift, h, 0.01, 500);
    CHECK(left.exited);
    CHECK(left.edge == box_edge::left);
    CHECK(left.exit_time == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("tracker refuses observation before seeding") {
    auto tab = make_table(disk_spec{2.0, 64, 512}, saddle);
    sim_state s = make_synthetic_state(tab);
    step_fields fields{tab, tab, tab};
    trajectory_tracker tracker(saddle_header());
    CHECK_THROWS_AS(tracker.observe(s, fields), std::logic_error);
}

TEST_CASE("axis gradient scan recovers the linear coefficient") {
    quarter_grid g(257, 2.0, axis_parity::odd, axis_parity::odd);
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i)
            g.at(i, j) = 2.0 * (i * g.spacing) * std::exp(-j * g.spacing);
    g.enforce_axis_parity();
    // d1 omega(0, x2) = 2 e^{-x2}; the scan below eta/2 peaks at the first row
    const double got = axis_gradient_at(g, 0.5);
    CHECK(got == doctest::Approx(2.0 * std::exp(-g.spacing)).epsilon(1e-6));
}

TEST_CASE("growth collector and pushforward rate") {
    // omega_t(x) = omega0(x1 e^{lam t}, x2 e^{-lam t}). The x1 ramp (width
    // 0.02) compresses, so the box Hessian grows at 2 lam; the x2 ramp
    // expands and its plateau covers the box, so it contributes no growth.
    // The fine spacing keeps the compressed ramp resolved across the window.
    const double lam = 0.3, amp = 0.05;
    auto omega0 = [&](double a, double b) {
        return amp * smooth01(a / 0.02) * smooth01(b / 0.05);
    };
    const double box_half = 0.06;
    growth_collector collector(box_half, 0.2);
    CHECK(collector.box_hi() == doctest::Approx(2.0 * box_half).epsilon(1e-15));

    sim_state s;
    s.omega = quarter_grid(513, 0.5, axis_parity::odd, axis_parity::odd);
    for (int step = 0; step <= 40; ++step) {
        const double t = 0.05 * step;
        const double stretch = std::exp(lam * t), shrink = std::exp(-lam * t);
        for (int j = 0; j < 513; ++j)
            for (int i = 0; i < 513; ++i)
                s.omega.at(i, j) = omega0(i * s.omega.spacing * stretch, j * s.omega.spacing * shrink);
        s.omega.enforce_axis_parity();
        s.time = t;
        collector.observe(s);
    }
    REQUIRE(collector.series().size() == 41);

    const auto rep = analyze_growth(collector.series(), 1.0, collector.box_hi(), 2.0);
    CHECK(rep.flag == growth_case::case2);  // sup grad ~ 8.5 < 2 e^2
    CHECK(rep.monotone_after_transient);
    CHECK(rep.fit_rate == doctest::Approx(2.0 * lam).epsilon(0.10));
    CHECK(rep.transient_end == doctest::Approx(0.2).epsilon(1e-9));

    // the same series at a hundred times the amplitude trips the gradient case
    std::vector<growth_sample> loud = collector.series();
    for (auto& g : loud) {
        g.sup_grad *= 100.0;
        g.sup_hess *= 100.0;
    }
    const auto rep1 = analyze_growth(loud, 1.0, collector.box_hi(), 2.0);
    CHECK(rep1.flag == growth_case::case1);
    CHECK(rep1.case1_time == doctest::Approx(0.0));

    // axis contribution is negligible against the ramp gradient
    CHECK(axis_gradient_normalized_max(collector.series(), 2.0) < 0.05);
}

TEST_CASE("growth analysis arithmetic on a synthetic series") {
    std::vector<growth_sample> series;
    for (int k = 0; k <= 30; ++k) {
        growth_sample g;
        g.t = 0.1 * k;
        g.sup_grad = 0.01;
        g.sup_hess = 3.0 * std::exp(0.7 * g.t);
        g.axis_raw = 0.002;
        series.push_back(g);
    }
    const auto rep = analyze_growth(series, 0.5, 0.1, 3.0);
    CHECK(rep.flag == growth_case::case2);
    CHECK(rep.fit_rate == doctest::Approx(0.7 / 0.5).epsilon(1e-9));
    CHECK(rep.monotone_after_transient);
    CHECK(axis_gradient_normalized_max(series, 3.0) == doctest::Approx(0.2).epsilon(1e-12));

    // a dip past the transient breaks monotonicity but barely moves the fit
    auto dipped = series;
    dipped[20].sup_hess *= 0.5;
    const auto rep2 = analyze_growth(dipped, 0.5, 0.1, 3.0);
    CHECK_FALSE(rep2.monotone_after_transient);

    // a window that ends early ignores the dip entirely
    const auto rep3 = analyze_growth(dipped, 0.5, 0.1, 1.9);
    CHECK(rep3.monotone_after_transient);

    // degenerate inputs stay undecided
    CHECK(analyze_growth({}, 0.5, 0.1, 3.0).flag == growth_case::undecided);
    CHECK(analyze_growth({series[0], series[1]}, 0.5, 0.1, 3.0).flag == growth_case::undecided);
}

TEST_CASE("constant ledger closure formula") {
    constant_ledger led;
    led.drift_constant = 0.77;
    led.transported_constant = 0.2;
    const double want = 4.0 + 4.0 * 0.77 - std::log(0.2);
    CHECK(led.a_formula_value() == doctest::Approx(want).epsilon(1e-13));
    CHECK(led.a_consistent(want + 0.005, 0.01));
    CHECK_FALSE(led.a_consistent(5.0, 0.01));
}

TEST_CASE("tracked runs demand a resolvable seed point") {
    sim_state s;
    s.omega = quarter_grid(65, 2.0, axis_parity::odd, axis_parity::odd);
    s.solver = disk_spec{2.0, 96, 128};
    tracked_run_options opts;
    opts.epsilon = 0.1;
    opts.eta = 1e-2;
    opts.a_exponent = 5.0;
    opts.t_horizon = 6.93;

    const double phi0y = std::exp(-opts.a_exponent * opts.epsilon * opts.t_horizon);
    const int needed = static_cast<int>(std::ceil(8.0 / phi0y)) + 1;
    bool threw = false;
    try {
        run_tracked(std::move(s), opts);
    } catch (const std::runtime_error& ex) {
        threw = true;
        const std::string what = ex.what();
        CHECK(what.find("not grid-resolvable") != std::string::npos);
        CHECK(what.find(std::to_string(needed)) != std::string::npos);
    }
    CHECK(threw);
}

TEST_CASE("tracked run with a tame field fires snapshots and collects series") {
    sim_state s;
    s.omega = quarter_grid(65, 2.0, axis_parity::odd, axis_parity::odd);
    for (int j = 0; j < 65; ++j)
        for (int i = 0; i < 65; ++i) {
            const vec2 p{i * s.omega.spacing, j * s.omega.spacing};
            const double r = norm(p);
            s.omega.at(i, j) = 0.5 * std::sin(M_PI * p.x / 2.0) * std::sin(M_PI * p.y / 2.0) *
                               smooth01((1.9 - r) / 0.3);
        }
    s.omega.enforce_axis_parity();
    s.solver = disk_spec{2.0, 96, 128};

    tracked_run_options opts;
    opts.epsilon = 1.0;
    opts.eta = 0.3;
    opts.a_exponent = 1.5;
    opts.t_horizon = 1.0;
    opts.t_cap = 0.4;
    opts.snapshot_times = {0.2};
    opts.progress_interval = 1;
    std::ostringstream log;
    opts.log = &log;

    int snaps = 0;
    double snap_time = -1.0;
    opts.on_snapshot = [&](const sim_state& st) {
        ++snaps;
        snap_time = st.time;
    };

    const auto result = run_tracked(std::move(s), opts);
    CHECK(snaps == 1);
    CHECK(snap_time >= 0.2 - 1e-6);
    CHECK(result.traj.samples.size() >= 2);
    CHECK(result.growth.size() >= 2);
    CHECK(result.box_hi == doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-12));
    CHECK(result.state.time <= opts.t_cap + 1e-9);
    CHECK(!result.state.ledger.empty());
    CHECK(log.str().find("phi=(") != std::string::npos);

    // the tracked-run header seeds the canonical corner point
    CHECK(result.traj.phi0.x == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(result.traj.phi0.y == doctest::Approx(std::exp(-1.5)).epsilon(1e-12));
}
