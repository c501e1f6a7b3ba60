#include "capssc/biot_savart.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "capssc/parallel.hpp"

namespace capssc {

namespace {

struct gl_rule {
    std::vector<double> x;  // nodes on [0, 1]
    std::vector<double> w;
};

// Gauss-Legendre nodes by Newton iteration on the Legendre polynomial,
// mapped to [0, 1]
gl_rule gauss_legendre(int n) {
    gl_rule rule;
    rule.x.resize(static_cast<std::size_t>(n));
    rule.w.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (t * p1 - p0) / (t * t - 1.0);
            const double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        rule.x[static_cast<std::size_t>(i)] = 0.5 * (1.0 + t);
        rule.w[static_cast<std::size_t>(i)] = 1.0 / ((1.0 - t * t) * dp * dp);
    }
    return rule;
}

const gl_rule& panel_rule() {
    static const gl_rule rule = gauss_legendre(16);
    return rule;
}

// panel edges from lo to 1, geometrically refined toward lo because the
// kernel peaks where |y| is small
std::vector<double> graded_edges(double lo) {
    std::vector<double> e{lo};
    double v = std::max(lo, 7.6e-6);  // ~2^-17 floor when lo = 0
    while (v < 0.5) {
        v *= 2.0;
        if (v > lo) e.push_back(v);
    }
    e.push_back(1.0);
    return e;
}

double kernel(double y1, double y2) {
    const double r2 = y1 * y1 + y2 * y2;
    return y1 * y2 / (r2 * r2);
}

double panel_value(const scalar_field& omega, double ax, double bx, double ay,
                   double by) {
    const gl_rule& rule = panel_rule();
    const double hx = bx - ax, hy = by - ay;
    double cell = 0.0;
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
        const double y1 = ax + hx * rule.x[i];
        double row = 0.0;
        for (std::size_t j = 0; j < rule.x.size(); ++j) {
            const double y2 = ay + hy * rule.x[j];
            row += rule.w[j] * kernel(y1, y2) * omega({y1, y2});
        }
        cell += rule.w[i] * row;
    }
    return cell * hx * hy;
}

// split a panel into quadrants until halving stops moving its value; errors
// add up, so each quadrant inherits a quarter of the budget
double refine_panel(const scalar_field& omega, double ax, double bx, double ay,
                    double by, double coarse, double tol, int depth) {
    const double mx = 0.5 * (ax + bx), my = 0.5 * (ay + by);
    const double q00 = panel_value(omega, ax, mx, ay, my);
    const double q10 = panel_value(omega, mx, bx, ay, my);
    const double q01 = panel_value(omega, ax, mx, my, by);
    const double q11 = panel_value(omega, mx, bx, my, by);
    const double fine = q00 + q10 + q01 + q11;
    if (depth >= 7 || std::abs(fine - coarse) <= tol) return fine;
    const double t = 0.25 * tol;
    return refine_panel(omega, ax, mx, ay, my, q00, t, depth + 1) +
           refine_panel(omega, mx, bx, ay, my, q10, t, depth + 1) +
           refine_panel(omega, ax, mx, my, by, q01, t, depth + 1) +
           refine_panel(omega, mx, bx, my, by, q11, t, depth + 1);
}

}  // namespace

corner_box corner_region(vec2 x) {
    corner_box box;
    box.lo = {std::clamp(2.0 * x.x, 0.0, 1.0), std::clamp(2.0 * x.y, 0.0, 1.0)};
    return box;
}

double main_integral(const scalar_field& omega, vec2 x) {
    const corner_box box = corner_region(x);
    if (box.empty()) return 0.0;
    if (box.lo.x < 1e-12 && box.lo.y < 1e-12)
        throw std::domain_error("corner integral diverges when the box touches the origin");

    const std::vector<double> ex = graded_edges(box.lo.x);
    const std::vector<double> ey = graded_edges(box.lo.y);

    // first pass sets the scale; second pass refines panels that still move
    std::vector<double> coarse;
    double scale = 0.0;
    for (std::size_t px = 0; px + 1 < ex.size(); ++px) {
        for (std::size_t py = 0; py + 1 < ey.size(); ++py) {
            const double c =
                panel_value(omega, ex[px], ex[px + 1], ey[py], ey[py + 1]);
            coarse.push_back(c);
            scale += std::abs(c);
        }
    }
    const double tol =
        std::max(1e-13, 1e-9 * scale / static_cast<double>(coarse.size()));
    double total = 0.0;
    std::size_t idx = 0;
    for (std::size_t px = 0; px + 1 < ex.size(); ++px)
        for (std::size_t py = 0; py + 1 < ey.size(); ++py)
            total += refine_panel(omega, ex[px], ex[px + 1], ey[py],
                                  ey[py + 1], coarse[idx++], tol, 0);
    return total;
}

bs_remainder extract_remainder(vec2 u_probe, const scalar_field& omega, vec2 x) {
    if (x.x == 0.0 || x.y == 0.0)
        throw std::domain_error("remainder extraction needs both coordinates nonzero");
    const double i_main = main_integral(omega, x);
    const double q = std::numbers::pi / 4.0;
    bs_remainder rem;
    rem.b1 = -q * u_probe.x / x.x - i_main;
    rem.b2 = q * u_probe.y / x.y - i_main;
    return rem;
}

std::pair<double, double> remainder_bound(vec2 x, double omega_sup, double grad_sup_local, double k0,
                                          double c0_const) {
    if (x.x < 0.0 || x.y < 0.0 || omega_sup < 0.0 || grad_sup_local < 0.0 || k0 < 0.0 || c0_const <= 0.0)
        throw std::invalid_argument("remainder bound inputs must be nonnegative (c0 positive)");
    auto one_bound = [&](double xj, double xo) {
        double pick = 0.0;
        if (omega_sup > 0.0) {
            const double log_branch = xj > 0.0 ? std::log1p(xo / xj) : (xo > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
            const double grad_branch = xo * grad_sup_local / omega_sup;
            pick = std::min(log_branch, grad_branch);
        }
        return c0_const * (omega_sup * (1.0 + pick) + std::sqrt(k0));
    };
    return {one_bound(x.x, x.y), one_bound(x.y, x.x)};
}

double window_gradient_sup(const scalar_field& omega, double w) {
    if (w <= 0.0) return 0.0;
    const int n = 48;
    const double step = w / n;
    const double fd = std::min(1e-4, 0.25 * step);
    double sup = 0.0;
    for (int i = 0; i <= n; ++i) {
        for (int j = 0; j <= n; ++j) {
            const vec2 p{i * step, j * step};
            const double gx = (omega({p.x + fd, p.y}) - omega({p.x - fd, p.y})) / (2.0 * fd);
            const double gy = (omega({p.x, p.y + fd}) - omega({p.x, p.y - fd})) / (2.0 * fd);
            sup = std::max(sup, std::hypot(gx, gy));
        }
    }
    return sup;
}

double field_sup_on_disk(const scalar_field& omega, double radius, int n_side) {
    const double h = 2.0 * radius / n_side;
    double sup = 0.0;
    for (int i = 0; i <= n_side; ++i) {
        for (int j = 0; j <= n_side; ++j) {
            const vec2 p{-radius + i * h, -radius + j * h};
            if (norm2(p) > radius * radius) continue;
            sup = std::max(sup, std::abs(omega(p)));
        }
    }
    return sup;
}

bs_certification certify_bs_law(const scalar_field& omega, const disk_spec& disk,
                                const std::vector<vec2>& sample_points, double k0) {
    for (const vec2& p : sample_points) {
        if (!(p.x > 0.0) || !(p.y > 0.0) || norm(p) > 0.5)
            throw std::invalid_argument("certification samples must lie in the open first quadrant with |x| <= 1/2");
    }
    if (k0 < 0.0) throw std::invalid_argument("kinetic energy must be nonnegative");

    const stream_solution sol = poisson_solve(omega, disk);
    bs_certification cert;
    cert.k0 = k0;
    cert.omega_sup = field_sup_on_disk(omega, disk.radius);
    cert.points.assign(sample_points.size(), {});

    parallel_for(static_cast<long>(sample_points.size()), [&](long idx) {
        const vec2 x = sample_points[static_cast<std::size_t>(idx)];
        // corner law orientation is the negative of the solver convention
        const vec2 u = sol.velocity(x) * -1.0;
        bs_point_report rep;
        rep.x = x;
        const bs_remainder rem = extract_remainder(u, omega, x);
        rep.b1 = rem.b1;
        rep.b2 = rem.b2;
        const double grad_sup = window_gradient_sup(omega, 2.0 * std::max(x.x, x.y));
        const auto [base1, base2] = remainder_bound(x, cert.omega_sup, grad_sup, k0, 1.0);
        rep.base1 = base1;
        rep.base2 = base2;
        cert.points[static_cast<std::size_t>(idx)] = rep;
    });

    double c0 = 0.0;
    for (const bs_point_report& rep : cert.points) {
        if (rep.base1 > 0.0) c0 = std::max(c0, std::abs(rep.b1) / rep.base1);
        if (rep.base2 > 0.0) c0 = std::max(c0, std::abs(rep.b2) / rep.base2);
    }
    cert.fitted_c0 = c0;

    double min_margin = std::numeric_limits<double>::infinity();
    bool all = true;
    for (bs_point_report& rep : cert.points) {
        rep.margin1 = c0 * rep.base1 - std::abs(rep.b1);
        rep.margin2 = c0 * rep.base2 - std::abs(rep.b2);
        min_margin = std::min({min_margin, rep.margin1, rep.margin2});
        if (rep.margin1 < -1e-12 || rep.margin2 < -1e-12) all = false;
    }
    cert.min_margin = cert.points.empty() ? 0.0 : min_margin;
    cert.all_within = all;
    return cert;
}

}  // namespace capssc
