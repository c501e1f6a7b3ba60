#include "capssc/harmonic_error.hpp"

#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <stdexcept>

#include "capssc/parallel.hpp"

namespace capssc {

namespace {

std::vector<vec2> probe_lattice(double half_extent, double step) {
    std::vector<vec2> pts;
    const int n = static_cast<int>(std::floor(half_extent / step));
    for (int i = -n; i <= n; ++i) {
        for (int j = -n; j <= n; ++j) {
            const vec2 p{i * step, j * step};
            if (norm(p) <= half_extent + 1e-12) pts.push_back(p);
        }
    }
    return pts;
}

}  // namespace

error_field build_error_field(const velocity_field& u_full, const scalar_field& omega, double k0,
                              int n_radial, int n_angular) {
    if (k0 < 0.0) throw std::invalid_argument("kinetic energy must be nonnegative");
    disk_spec disk;
    disk.radius = bs_law_radius;
    disk.n_radial = n_radial;
    disk.n_angular = n_angular;
    auto sol = std::make_shared<stream_solution>(poisson_solve(omega, disk));

    error_field e;
    e.k0 = k0;
    e.eval = [u_full, sol](vec2 p) {
        if (norm(p) > sol->disk.radius + 1e-12)
            throw std::domain_error("error-field probe outside the solve disk");
        return u_full(p) - sol->velocity(p);
    };

    e.probes = probe_lattice(0.45, 0.05);
    e.samples.resize(e.probes.size());
    std::vector<double> divs(e.probes.size()), curls(e.probes.size());
    const double h = 1e-4;
    parallel_for(static_cast<long>(e.probes.size()), [&](long idx) {
        const std::size_t i = static_cast<std::size_t>(idx);
        const vec2 p = e.probes[i];
        e.samples[i] = e.eval(p);
        const vec2 xp = e.eval({p.x + h, p.y}), xm = e.eval({p.x - h, p.y});
        const vec2 yp = e.eval({p.x, p.y + h}), ym = e.eval({p.x, p.y - h});
        divs[i] = std::abs((xp.x - xm.x) / (2 * h) + (yp.y - ym.y) / (2 * h));
        curls[i] = std::abs((xp.y - xm.y) / (2 * h) - (yp.x - ym.x) / (2 * h));
    });
    for (std::size_t i = 0; i < e.probes.size(); ++i) {
        e.div_residual = std::max(e.div_residual, divs[i]);
        e.curl_residual = std::max(e.curl_residual, curls[i]);
    }

    // || e ||_{L2} over the solve disk equals the H1 seminorm of its stream
    const int nr = 96, nt = 128;
    const double dr = bs_law_radius / nr;
    const double dth = 2.0 * std::numbers::pi / nt;
    std::vector<double> ring(static_cast<std::size_t>(nr), 0.0);
    parallel_for(nr, [&](long i) {
        const double r = (i + 0.5) * dr;
        double acc = 0.0;
        for (int k = 0; k < nt; ++k) {
            const double th = k * dth;
            const vec2 v = e.eval({r * std::cos(th), r * std::sin(th)});
            acc += norm2(v);
        }
        ring[static_cast<std::size_t>(i)] = acc * r * dr * dth;
    });
    double l2sq = 0.0;
    for (double v : ring) l2sq += v;
    e.stream_l2 = std::sqrt(l2sq);
    return e;
}

c1_check c1_bound_check(const error_field& e) {
    const std::vector<vec2> pts = probe_lattice(0.48, 0.02);
    const double h = 1e-3;
    std::vector<double> sups(pts.size(), 0.0);
    parallel_for(static_cast<long>(pts.size()), [&](long idx) {
        const vec2 p = pts[static_cast<std::size_t>(idx)];
        const vec2 xp = e.eval({p.x + h, p.y}), xm = e.eval({p.x - h, p.y});
        const vec2 yp = e.eval({p.x, p.y + h}), ym = e.eval({p.x, p.y - h});
        const double a = (xp.x - xm.x) / (2 * h), b = (yp.x - ym.x) / (2 * h);
        const double c = (xp.y - xm.y) / (2 * h), d = (yp.y - ym.y) / (2 * h);
        sups[static_cast<std::size_t>(idx)] = std::sqrt(a * a + b * b + c * c + d * d);
    });
    c1_check out;
    for (double v : sups) out.measured_c1 = std::max(out.measured_c1, v);
    if (e.k0 == 0.0) {
        double amp = 0.0;
        for (const vec2& v : e.samples) amp = std::max(amp, norm(v));
        if (amp > 1e-10)
            throw std::invalid_argument("nonzero error field reported with zero kinetic energy");
        out.ratio = 0.0;
        return out;
    }
    out.ratio = out.measured_c1 / std::sqrt(e.k0);
    return out;
}

double odd_pointwise_check(const error_field& e) {
    if (e.k0 <= 0.0) throw std::invalid_argument("pointwise check needs positive kinetic energy");
    // axis traces must vanish under the odd reflection symmetries
    double defect = 0.0;
    for (int i = -24; i <= 24; ++i) {
        const double t = i * 0.02;
        defect = std::max(defect, std::abs(e.eval({0.0, t}).x));
        defect = std::max(defect, std::abs(e.eval({t, 0.0}).y));
    }
    if (defect > 1e-8) throw std::runtime_error("error field violates the odd reflection symmetry");

    const double root_k0 = std::sqrt(e.k0);
    double worst = 0.0;
    for (std::size_t i = 0; i < e.probes.size(); ++i) {
        const vec2 p = e.probes[i];
        const vec2 v = e.samples[i];
        if (std::abs(p.x) >= 1e-4) worst = std::max(worst, std::abs(v.x) / (root_k0 * std::abs(p.x)));
        if (std::abs(p.y) >= 1e-4) worst = std::max(worst, std::abs(v.y) / (root_k0 * std::abs(p.y)));
    }
    return worst;
}

double mean_value_residual(const error_field& e, double circle_radius, int n_samples) {
    double worst = 0.0;
    for (std::size_t i = 0; i < e.probes.size(); ++i) {
        const vec2 p = e.probes[i];
        vec2 avg{};
        for (int k = 0; k < n_samples; ++k) {
            const double th = 2.0 * std::numbers::pi * k / n_samples;
            avg += e.eval({p.x + circle_radius * std::cos(th), p.y + circle_radius * std::sin(th)});
        }
        avg = avg / static_cast<double>(n_samples);
        const vec2 v = e.samples[i];
        worst = std::max({worst, std::abs(v.x - avg.x), std::abs(v.y - avg.y)});
    }
    return worst;
}

double h1_inner_product(const velocity_field& grad_a, const velocity_field& grad_b, double radius,
                        int n_r, int n_th) {
    // composite Simpson in r (the r-weighted integrand vanishes at r = 0),
    // exact periodic trapezoid in theta
    if (n_r % 2 != 0) ++n_r;
    const double dr = radius / n_r;
    const double dth = 2.0 * std::numbers::pi / n_th;
    std::vector<double> ring(static_cast<std::size_t>(n_r) + 1, 0.0);
    parallel_for(n_r + 1, [&](long i) {
        if (i == 0) return;  // r = 0 contributes nothing
        const double r = i * dr;
        double acc = 0.0;
        for (int k = 0; k < n_th; ++k) {
            const double th = k * dth;
            const vec2 p{r * std::cos(th), r * std::sin(th)};
            acc += dot(grad_a(p), grad_b(p));
        }
        const double simpson_w = (i == n_r) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        ring[static_cast<std::size_t>(i)] = simpson_w * acc * r * dth;
    });
    double total = 0.0;
    for (double v : ring) total += v;
    return total * dr / 3.0;
}

namespace {

std::complex<double> stream_poly(const harmonic_stream& f, vec2 p) {
    const std::complex<double> w{p.x / f.radius, p.y / f.radius};
    const std::complex<double> w2 = w * w;
    std::complex<double> pw = w2;  // w^m starting at m = 2
    std::complex<double> g{};
    for (double c : f.coef) {
        g += c * pw;
        pw *= w2;
    }
    return g;
}

std::complex<double> stream_poly_deriv(const harmonic_stream& f, vec2 p) {
    const std::complex<double> w{p.x / f.radius, p.y / f.radius};
    const std::complex<double> w2 = w * w;
    std::complex<double> pw = w;  // w^{m-1} starting at m = 2
    std::complex<double> g{};
    double m = 2.0;
    for (double c : f.coef) {
        g += c * m * pw;
        pw *= w2;
        m += 2.0;
    }
    return g / f.radius;
}

}  // namespace

double harmonic_stream::value(vec2 p) const { return stream_poly(*this, p).imag(); }

vec2 harmonic_stream::grad(vec2 p) const {
    const std::complex<double> gp = stream_poly_deriv(*this, p);
    return {gp.imag(), gp.real()};
}

vec2 harmonic_stream::grad_perp(vec2 p) const {
    const std::complex<double> gp = stream_poly_deriv(*this, p);
    return {-gp.real(), gp.imag()};
}

double harmonic_stream::grad_l2() const {
    double s = 0.0;
    double m = 2.0;
    for (double c : coef) {
        s += std::numbers::pi * m * c * c;
        m += 2.0;
    }
    return std::sqrt(s);
}

void harmonic_stream::normalize_grad_l2() {
    const double n = grad_l2();
    if (n == 0.0) throw std::invalid_argument("cannot normalize the zero stream");
    for (double& c : coef) c /= n;
}

}  // namespace capssc
