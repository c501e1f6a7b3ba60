#pragma once

#include <string>

#include "capssc/disk_poisson.hpp"
#include "capssc/init_data.hpp"

namespace capssc {

// Run configuration grouped into INI sections [run], [grid], [profile],
// [suites]. Every key can be overridden with "section.key=value".
struct run_config {
    // [run]
    double epsilon = 0.1;
    double eta = 1e-2;
    double a_exponent = 5.0;
    double sigma = 1.0;  // fixed by the unit-scaling convention
    double t_horizon = 0.0;  // 0: derive the largest grid-resolvable horizon
    double cfl = 0.5;
    double fixed_dt = 0.0;
    long checkpoint_interval = 0;
    unsigned long seed = 12345;
    std::string output_dir = "out";

    // [grid]
    int n_side = 512;
    int solver_radial = 768;
    int solver_angular = 1024;

    // [profile]
    double blend_width = 0.6e-3;
    double band_top_width = 0.30;
    double boundary_gap = 0.3e-3;
    double collar_width = 0.5e-3;

    // [suites]
    int geometry_trials = 1000;
    int symmetric_curves = 100;
    int bs_points = 100;
    int harmonic_fields = 50;

    void validate() const;

    // horizon such that the tracked point e^{-a eps T} clears 8 grid cells,
    // unless t_horizon is set explicitly
    double horizon() const;
    double grid_spacing() const { return 2.0 / (n_side - 1); }
    profile_spec profile() const;
    disk_spec solver() const;
};

// name of the environment variable holding a default config path
extern const char* config_env_var;

run_config load_config(const std::string& path);

// apply one "section.key=value" (or "key=value" when unambiguous) override
void apply_override(run_config& cfg, const std::string& assignment);

}  // namespace capssc
