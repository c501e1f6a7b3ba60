#pragma once

#include <cmath>
#include <functional>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "capssc/evolve.hpp"
#include "capssc/grid.hpp"
#include "capssc/point.hpp"

namespace capssc {

// reference lifespan threshold (1/epsilon) |log(eta/4)|
double threshold_time(double epsilon, double eta);

enum class box_edge { none, top, right, bottom, left };
const char* box_edge_name(box_edge e);

struct trajectory_sample {
    double t = 0.0;
    vec2 phi{};
    double log_product = 0.0;  // log(phi1) + log(phi2)
    double omega_along = 0.0;  // vorticity sampled at phi
    vec2 u_at{};               // advecting velocity at phi
};

struct trajectory_series {
    std::vector<trajectory_sample> samples;
    vec2 phi0{};
    double box_half = 0.0;  // e^{-epsilon t_horizon}: tracked box is [0, box_half]^2
    double epsilon = 0.0;
    double a_exponent = 0.0;
    double t_horizon = 0.0;
    bool exited = false;
    double exit_time = std::numeric_limits<double>::quiet_NaN();
    box_edge edge = box_edge::none;
};

// Advances the tracked point with classical RK4 across each accepted step,
// using the same velocity fields the stepper used (start, midpoint average,
// corrector end). Sampling stops once the point leaves the box.
class trajectory_tracker {
  public:
    trajectory_tracker(trajectory_series header);

    void seed(sim_state& s);  // record the t = 0 row
    void observe(sim_state& after, const step_fields& fields);
    bool exited() const { return data_.exited; }
    const trajectory_series& series() const { return data_; }

  private:
    trajectory_series data_;
    vec2 phi_{};
    double prev_time_ = 0.0;
    bool seeded_ = false;
};

struct growth_sample {
    double t = 0.0;
    double sup_grad = 0.0;   // sup |grad omega| over the tracked box
    double sup_hess = 0.0;   // sup Frobenius |grad^2 omega| over the box
    double axis_raw = 0.0;   // max |d1 omega(0, x2)|, 0 < x2 < eta/2
};

// one-sided axis derivative scan below the given height
double axis_gradient_at(const quarter_grid& omega, double eta);

// per-step growth metrics over the fixed box [0, 2 box_half]^2
class growth_collector {
  public:
    growth_collector(double box_half, double eta);
    void observe(const sim_state& s);
    const std::vector<growth_sample>& series() const { return series_; }
    double box_hi() const { return box_hi_; }

  private:
    double box_hi_;
    double eta_;
    std::vector<growth_sample> series_;
};

enum class growth_case { undecided, case1, case2 };

struct growth_report {
    std::vector<growth_sample> series;
    growth_case flag = growth_case::undecided;
    double case1_time = std::numeric_limits<double>::quiet_NaN();
    double fit_rate = 0.0;  // exponential fit exponent of sup_hess, divided by epsilon
    double box_hi = 0.0;
    bool monotone_after_transient = false;
    double transient_end = 0.0;  // 10% of the analyzed window
};

// classify the gradient-threshold dichotomy, fit the Hessian growth rate,
// and check monotonicity past the transient; window_end bounds the analysis
growth_report analyze_growth(const std::vector<growth_sample>& series, double epsilon, double box_hi,
                             double window_end);

// max over the window of axis_raw normalized by the window sup of sup_grad
double axis_gradient_normalized_max(const std::vector<growth_sample>& series, double window_end);

struct transported_check {
    double max_drift = 0.0;        // relative drift of omega along the trajectory
    double omega0_at_start = 0.0;  // measured initial value at phi0
    double c2_formula = 0.0;       // sin^3(z) sin(w) e^{(3+a) eps T} at the start point
};
transported_check transported_value_check(const trajectory_series& traj);

struct drift_report {
    double sup_rate = 0.0;       // sup |d/dt log(phi1 phi2)| over the pre-exit window
    double rms_rate = 0.0;
    double implied_2c2 = 0.0;    // sup_rate / epsilon
    double fitted_2c2_rms = 0.0; // rms_rate / epsilon
    bool exit_bound_checked = false;
    double exit_log_phi1 = 0.0;     // log phi1 at exit
    double exit_log_phi1_cap = 0.0; // 2 C2 eps T_exit - a eps T with the sup-fitted C2
    bool exit_bound_ok = false;
};
// needs at least 3 samples before exit; differentiates log_product numerically
drift_report hyperbola_drift(const trajectory_series& traj);

struct sign_margin_report {
    // normalized margins m1 = u1 / (phi1 eps log(1/eta)), m2 = u2 / (phi2 ...)
    double worst_m1 = 0.0;  // max over pre-exit samples; law demands <= -1/48
    double worst_m2 = 0.0;  // min over pre-exit samples; law demands >= +1/48
    std::vector<double> violation_times;
    double t_star = std::numeric_limits<double>::quiet_NaN();
    double t_star_bound = 0.0;  // 48 (log eta^-1)^{-1} (a-1) t_horizon
    bool t_star_ok = false;
};
sign_margin_report sign_bounds_check(const trajectory_series& traj, double eta);

// fitted constants of the quantitative laws, with a provenance note
struct constant_ledger {
    double remainder_constant = 0.0;    // corner-law remainder fit
    double energy_constant = 0.0;       // kinetic energy over epsilon^2
    double drift_constant = 0.0;        // half the fitted log-product drift rate over epsilon
    double transported_constant = 0.0;  // initial-value constant of the tracked point
    double harmonic_constant = 0.0;     // harmonic error family fit
    std::string provenance;

    // the closure exponent 4 + 4 drift - log(transported)
    double a_formula_value() const { return 4.0 + 4.0 * drift_constant - std::log(transported_constant); }
    // true when the formula reproduces the configured exponent within tol
    bool a_consistent(double a_configured, double tol) const {
        return std::abs(a_formula_value() - a_configured) <= tol;
    }
};

struct tracked_run_options {
    double epsilon = 0.1;
    double eta = 1e-2;
    double a_exponent = 5.0;
    double t_horizon = 0.0;
    double cfl = 0.5;
    double t_cap = 0.0;  // 0: use the exit-time bound from sign_bounds
    bool stop_after_exit = true;
    std::vector<double> snapshot_times;  // ascending
    std::function<void(const sim_state&)> on_snapshot;
    bool quiet = false;
    std::ostream* log = nullptr;
    long progress_interval = 50;
};

struct tracked_run_result {
    trajectory_series traj;
    std::vector<growth_sample> growth;
    double box_hi = 0.0;
    sim_state state;  // final state with its conservation ledger
};

// Drive the simulation with the tracked point, growth metrics, and optional
// snapshots until exit (or the cap). Enforces the resolvability requirement
// spacing < phi0_2 / 4, naming the needed grid in the error.
tracked_run_result run_tracked(sim_state initial, const tracked_run_options& opts);

}  // namespace capssc
