#include "capssc/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "capssc/parallel.hpp"

namespace capssc {

namespace {

// Catmull-Rom weights at parameter t in [0,1) for nodes p_{-1}, p0, p1, p2
inline void cr_weights(double t, double w[4]) {
    const double t2 = t * t, t3 = t2 * t;
    w[0] = 0.5 * (-t3 + 2.0 * t2 - t);
    w[1] = 0.5 * (3.0 * t3 - 5.0 * t2 + 2.0);
    w[2] = 0.5 * (-3.0 * t3 + 4.0 * t2 + t);
    w[3] = 0.5 * (t3 - t2);
}

}  // namespace

double quarter_grid::sample(double x, double y) const {
    // non-finite coordinates (blown-up characteristics) must degrade to NaN
    // rather than feed the index computation
    if (!std::isfinite(x) || !std::isfinite(y)) return std::numeric_limits<double>::quiet_NaN();
    const double u = x / spacing, v = y / spacing;
    const int i0 = static_cast<int>(std::floor(u));
    const int j0 = static_cast<int>(std::floor(v));
    double wx[4], wy[4];
    cr_weights(u - i0, wx);
    cr_weights(v - j0, wy);
    double acc = 0.0;
    for (int b = 0; b < 4; ++b) {
        double row = 0.0;
        for (int a = 0; a < 4; ++a) row += wx[a] * value(i0 - 1 + a, j0 - 1 + b);
        acc += wy[b] * row;
    }
    return acc;
}

double quarter_grid::sample_monotone(double x, double y) const {
    const double raw = sample(x, y);
    if (!std::isfinite(raw)) return raw;
    const double u = x / spacing, v = y / spacing;
    const int i0 = static_cast<int>(std::floor(u));
    const int j0 = static_cast<int>(std::floor(v));
    double lo = value(i0, j0), hi = lo;
    for (int b = 0; b < 2; ++b)
        for (int a = 0; a < 2; ++a) {
            const double q = value(i0 + a, j0 + b);
            lo = std::min(lo, q);
            hi = std::max(hi, q);
        }
    return std::clamp(raw, lo, hi);
}

void quarter_grid::enforce_axis_parity() {
    if (parity_x == axis_parity::odd)
        for (int j = 0; j < n; ++j) at(0, j) = 0.0;
    if (parity_y == axis_parity::odd)
        for (int i = 0; i < n; ++i) at(i, 0) = 0.0;
}

namespace {
// 4th-order centered first/second derivative coefficients, offsets -2..2
constexpr double d1c[5] = {1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0};
constexpr double d2c[5] = {-1.0 / 12.0, 16.0 / 12.0, -30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0};
}  // namespace

vec2 gradient_at(const quarter_grid& g, int i, int j) {
    double gx = 0.0, gy = 0.0;
    for (int k = 0; k < 5; ++k) {
        gx += d1c[k] * g.value(i - 2 + k, j);
        gy += d1c[k] * g.value(i, j - 2 + k);
    }
    return {gx / g.spacing, gy / g.spacing};
}

double hessian_frobenius_at(const quarter_grid& g, int i, int j) {
    double fxx = 0.0, fyy = 0.0, fxy = 0.0;
    for (int k = 0; k < 5; ++k) {
        fxx += d2c[k] * g.value(i - 2 + k, j);
        fyy += d2c[k] * g.value(i, j - 2 + k);
    }
    for (int a = 0; a < 5; ++a) {
        if (d1c[a] == 0.0) continue;
        double col = 0.0;
        for (int b = 0; b < 5; ++b) col += d1c[b] * g.value(i - 2 + a, j - 2 + b);
        fxy += d1c[a] * col;
    }
    const double h2 = g.spacing * g.spacing;
    fxx /= h2;
    fyy /= h2;
    fxy /= h2;
    return std::sqrt(fxx * fxx + 2.0 * fxy * fxy + fyy * fyy);
}

double one_sided_dx_at_axis(const quarter_grid& g, int j) {
    static constexpr double c[5] = {-25.0 / 12.0, 4.0, -3.0, 4.0 / 3.0, -1.0 / 4.0};
    double acc = 0.0;
    for (int k = 0; k < 5; ++k) acc += c[k] * g.value(k, j);
    return acc / g.spacing;
}

box_sups sup_derivatives_box(const quarter_grid& g, double xmax, double ymax) {
    const int imax = std::min(g.n - 1, static_cast<int>(std::floor(xmax / g.spacing)));
    const int jmax = std::min(g.n - 1, static_cast<int>(std::floor(ymax / g.spacing)));
    std::vector<box_sups> rows(static_cast<std::size_t>(jmax) + 1);
    parallel_for(jmax + 1, [&](long j) {
        box_sups s;
        for (int i = 0; i <= imax; ++i) {
            s.grad = std::max(s.grad, norm(gradient_at(g, i, static_cast<int>(j))));
            s.hess = std::max(s.hess, hessian_frobenius_at(g, i, static_cast<int>(j)));
        }
        rows[static_cast<std::size_t>(j)] = s;
    });
    box_sups out;
    for (const auto& s : rows) {
        out.grad = std::max(out.grad, s.grad);
        out.hess = std::max(out.hess, s.hess);
    }
    return out;
}

field_norms norms(const quarter_grid& g) {
    const double h2 = g.spacing * g.spacing;
    std::vector<field_norms> rows(static_cast<std::size_t>(g.n));
    parallel_for(g.n, [&](long j) {
        field_norms s;
        const double wj = (j == 0 || j == g.n - 1) ? 0.5 : 1.0;
        for (int i = 0; i < g.n; ++i) {
            const double wi = (i == 0 || i == g.n - 1) ? 0.5 : 1.0;
            const double v = g.at(i, static_cast<int>(j));
            const double av = std::fabs(v);
            s.sup = std::max(s.sup, av);
            s.l1 += wi * wj * av;
            s.l2 += wi * wj * v * v;
        }
        rows[static_cast<std::size_t>(j)] = s;
    });
    field_norms out;
    for (const auto& s : rows) {
        out.sup = std::max(out.sup, s.sup);
        out.l1 += s.l1;
        out.l2 += s.l2;
    }
    out.l1 *= 4.0 * h2;              // four quadrants
    out.l2 = std::sqrt(4.0 * h2 * out.l2);
    return out;
}

}  // namespace capssc
