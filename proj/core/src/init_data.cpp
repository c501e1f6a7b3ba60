#include "capssc/init_data.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "capssc/parallel.hpp"

namespace capssc {

namespace {

// quintic smoothstep: C^2 monotone ramp from 0 at u <= 0 to 1 at u >= 1
double smoothstep(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

}  // namespace

double profile_spec::smallness_factor() const { return 48.0 * (a_exponent - 1.0) / std::log(1.0 / eta); }

void profile_spec::validate() const {
    if (!(eta > 0.0) || eta >= 1.0) throw std::invalid_argument("eta must lie in (0, 1)");
    if (!(blend_width > 0.0)) throw std::invalid_argument("blend width must be positive");
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    if (!(a_exponent > 1.0)) throw std::invalid_argument("the horizon exponent must exceed 1");
    if (!(band_top_width > blend_width)) throw std::invalid_argument("band width must exceed the axis ramp");
    if (!(boundary_gap > 0.0) || !(collar_width > 0.0))
        throw std::invalid_argument("collar parameters must be positive");
}

double profile_value(const profile_spec& spec, vec2 x) {
    if (x.x <= 0.0 || x.y <= 0.0) return 0.0;

    const double half = spec.core_half_width();
    const double box_coord = std::max(x.x, x.y);
    const double s3 = std::sin(x.x);
    if (box_coord <= half) return s3 * s3 * s3 * std::sin(x.y);

    const double t_band = half;  // blend distance above the core box
    const double chi = smoothstep((box_coord - half) / t_band);

    // first-coordinate ramp width, widened where the core box hands over
    const double w = spec.blend_width;
    const double width1 =
        w + (spec.band_top_width - w) * (1.0 - smoothstep((x.y - half) / t_band));
    const double a1 = smoothstep(x.x / width1);
    const double a2 = smoothstep(x.y / w);

    const double r = norm(x);
    const double r_cut = 2.0 - spec.boundary_gap - spec.collar_width;
    const double ob = 1.0 - smoothstep((r - r_cut) / spec.collar_width);

    const double plateau = a1 * a2 * ob;
    if (chi >= 1.0) return plateau;
    const double core = s3 * s3 * s3 * std::sin(x.y);
    return (1.0 - chi) * core + chi * plateau;
}

double profile_value_signed(const profile_spec& spec, vec2 x) {
    const double sx = x.x < 0.0 ? -1.0 : 1.0;
    const double sy = x.y < 0.0 ? -1.0 : 1.0;
    return sx * sy * profile_value(spec, {std::abs(x.x), std::abs(x.y)});
}

double profile_nonplateau_measure(const profile_spec& spec, int n_side) {
    const double h = 2.0 / n_side;
    std::vector<double> rows(static_cast<std::size_t>(n_side), 0.0);
    parallel_for(n_side, [&](long i) {
        const double x1 = (i + 0.5) * h;
        double acc = 0.0;
        for (int j = 0; j < n_side; ++j) {
            const double x2 = (j + 0.5) * h;
            if (x1 * x1 + x2 * x2 > 4.0) continue;
            if (profile_value(spec, {x1, x2}) < 1.0) acc += h * h;
        }
        rows[static_cast<std::size_t>(i)] = acc;
    });
    double total = 0.0;
    for (double v : rows) total += v;
    return total;
}

quarter_grid build_profile(const profile_spec& spec, int n_side) {
    spec.validate();
    const double measure = profile_nonplateau_measure(spec);
    if (measure > spec.eta) {
        std::ostringstream msg;
        msg << "profile non-plateau measure " << measure << " exceeds the budget " << spec.eta
            << "; narrow the ramps";
        throw std::invalid_argument(msg.str());
    }

    quarter_grid g(n_side, 2.0, axis_parity::odd, axis_parity::odd);
    parallel_for(n_side, [&](long i) {
        for (int j = 0; j < n_side; ++j) {
            g.at(static_cast<int>(i), j) = profile_value(spec, {i * g.spacing, j * g.spacing});
        }
    });
    g.enforce_axis_parity();
    return g;
}

vec2 initial_velocity::velocity(vec2 p) const { return stream.velocity(p) * epsilon; }

initial_velocity build_initial_velocity(const profile_spec& spec, const disk_spec& disk) {
    spec.validate();
    if (std::abs(disk.radius - 2.0) > 1e-12)
        throw std::invalid_argument("initial data is defined on the radius-2 disk");

    initial_velocity out;
    out.epsilon = spec.epsilon;
    out.stream = poisson_solve([&spec](vec2 p) { return profile_value_signed(spec, p); }, disk);
    out.k0 = kinetic_energy([&out](vec2 p) { return out.velocity(p); }, disk);
    return out;
}

double kinetic_energy(const velocity_field& u, const disk_spec& disk, int n_r, int n_th) {
    const double dr = disk.radius / n_r;
    const double dth = 2.0 * std::numbers::pi / n_th;
    std::vector<double> ring(static_cast<std::size_t>(n_r), 0.0);
    parallel_for(n_r, [&](long i) {
        const double r = (i + 0.5) * dr;
        double acc = 0.0;
        for (int k = 0; k < n_th; ++k) {
            const double th = k * dth;
            acc += norm2(u({r * std::cos(th), r * std::sin(th)}));
        }
        ring[static_cast<std::size_t>(i)] = 0.5 * acc * r * dr * dth;
    });
    double total = 0.0;
    for (double v : ring) total += v;
    return total;
}

}  // namespace capssc
