#include "capssc/disk_poisson.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "capssc/fft.hpp"
#include "capssc/parallel.hpp"

namespace capssc {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// Lagrange cubic weights for 4 consecutive uniform nodes starting at j0,
// evaluated at fractional offset t in node units (t measured from node j0).
void lagrange4(double t, double w[4]) {
    const double t1 = t - 1.0, t2 = t - 2.0, t3 = t - 3.0;
    w[0] = -t1 * t2 * t3 / 6.0;
    w[1] = t * t2 * t3 / 2.0;
    w[2] = -t * t1 * t3 / 2.0;
    w[3] = t * t1 * t2 / 6.0;
}

// window start for a 4-node stencil around continuous node coordinate s
int window_start(double s, int last_node) {
    int j0 = static_cast<int>(std::floor(s)) - 1;
    if (j0 < 0) j0 = 0;
    if (j0 > last_node - 3) j0 = last_node - 3;
    return j0;
}

struct mode_sum {
    double value = 0.0;   // sum Re(c_m e^{i m theta})
    double theta_d = 0.0; // sum Re(i m c_m e^{i m theta})
};

}  // namespace

void disk_spec::validate() const {
    if (!(radius > 0.0)) throw std::invalid_argument("disk radius must be positive");
    if (n_radial < 16) throw std::invalid_argument("disk n_radial must be at least 16");
    if (n_angular < 32 || !is_power_of_two(static_cast<std::size_t>(n_angular)))
        throw std::invalid_argument("disk n_angular must be a power of two, at least 32");
}

double disk_spec::dtheta() const { return two_pi / n_angular; }

vec2 image_point(vec2 y, double R) {
    const double r2 = norm2(y);
    if (r2 == 0.0) throw std::domain_error("image point of the disk center is not defined");
    return y * (R * R / r2);
}

double green_function(vec2 x, vec2 y, double R) {
    const double ry = norm(y);
    if (ry < 1e-300) {
        const double rx = norm(x);
        if (rx == 0.0) throw std::domain_error("Green's function diverges on the diagonal");
        return std::log(rx / R) / two_pi;
    }
    const vec2 ys = image_point(y, R);
    const double d = dist(x, y);
    if (d == 0.0) throw std::domain_error("Green's function diverges on the diagonal");
    return (std::log(d) - std::log(ry / R * dist(x, ys))) / two_pi;
}

vec2 green_gradient_x(vec2 x, vec2 y, double R) {
    const double ry = norm(y);
    if (ry < 1e-300) {
        const double r2 = norm2(x);
        if (r2 == 0.0) throw std::domain_error("Green's gradient diverges on the diagonal");
        return x / (two_pi * r2);
    }
    const vec2 d = x - y;
    const double d2 = norm2(d);
    if (d2 == 0.0) throw std::domain_error("Green's gradient diverges on the diagonal");
    const vec2 ds = x - image_point(y, R);
    return (d / d2 - ds / norm2(ds)) / two_pi;
}

vec2 symmetrized_velocity_kernel(vec2 x, vec2 y, double R) {
    const vec2 srcs[4] = {y, {-y.x, y.y}, {y.x, -y.y}, {-y.x, -y.y}};
    const double sgn[4] = {1.0, -1.0, -1.0, 1.0};
    vec2 u{};
    for (int s = 0; s < 4; ++s) {
        const vec2 g = green_gradient_x(x, srcs[s], R);
        u += vec2{-g.y, g.x} * sgn[s];
    }
    return u;
}

stream_solution poisson_solve(const std::function<double(vec2)>& omega, const disk_spec& disk) {
    disk.validate();
    const int nr = disk.n_radial;
    const int nt = disk.n_angular;
    const double dr = disk.dr();
    const double dth = disk.dtheta();
    const int n_modes = nt / 2 + 1;

    // sample the source on the polar grid and transform each radius row
    std::vector<std::vector<std::complex<double>>> source(static_cast<std::size_t>(nr) + 1);
    parallel_for(nr + 1, [&](long j) {
        std::vector<std::complex<double>> row(static_cast<std::size_t>(nt));
        const double r = j * dr;
        for (int k = 0; k < nt; ++k) {
            const double th = k * dth;
            row[static_cast<std::size_t>(k)] = omega({r * std::cos(th), r * std::sin(th)});
        }
        fft_forward(row);
        source[static_cast<std::size_t>(j)] = std::move(row);
    });

    stream_solution sol;
    sol.disk = disk;
    sol.psi.assign(static_cast<std::size_t>(n_modes), {});
    sol.dpsi.assign(static_cast<std::size_t>(n_modes), {});

    parallel_for(n_modes, [&](long m) {
        const std::size_t nn = static_cast<std::size_t>(nr) + 1;
        std::vector<double> lower(nn, 0.0), diag(nn, 0.0), upper(nn, 0.0);
        std::vector<std::complex<double>> rhs(nn);

        if (m == 0) {
            // finite-volume pole closure: laplacian(psi)(0) = 4 (psi_1 - psi_0) / dr^2
            diag[0] = -4.0 / (dr * dr);
            upper[0] = 4.0 / (dr * dr);
            rhs[0] = source[0][0];
        } else {
            diag[0] = 1.0;
            rhs[0] = 0.0;
        }
        for (int j = 1; j < nr; ++j) {
            const double r = j * dr;
            lower[static_cast<std::size_t>(j)] = 1.0 / (dr * dr) - 1.0 / (2.0 * r * dr);
            diag[static_cast<std::size_t>(j)] =
                -2.0 / (dr * dr) - static_cast<double>(m) * static_cast<double>(m) / (r * r);
            upper[static_cast<std::size_t>(j)] = 1.0 / (dr * dr) + 1.0 / (2.0 * r * dr);
            rhs[static_cast<std::size_t>(j)] = source[static_cast<std::size_t>(j)][static_cast<std::size_t>(m)];
        }
        diag[nn - 1] = 1.0;  // Dirichlet wall
        rhs[nn - 1] = 0.0;

        // Thomas sweep (real coefficients, complex right-hand side)
        std::vector<double> cp(nn, 0.0);
        std::vector<std::complex<double>> dp(nn);
        cp[0] = upper[0] / diag[0];
        dp[0] = rhs[0] / diag[0];
        for (std::size_t j = 1; j < nn; ++j) {
            const double den = diag[j] - lower[j] * cp[j - 1];
            cp[j] = upper[j] / den;
            dp[j] = (rhs[j] - lower[j] * dp[j - 1]) / den;
        }
        std::vector<std::complex<double>> u(nn);
        u[nn - 1] = dp[nn - 1];
        for (std::size_t j = nn - 1; j-- > 0;) u[j] = dp[j] - cp[j] * u[j + 1];

        // radial derivative, fourth order with one-sided ends
        std::vector<std::complex<double>> du(nn);
        auto at = [&](long j) { return u[static_cast<std::size_t>(j)]; };
        for (long j = 0; j <= nr; ++j) {
            std::complex<double> v;
            if (j >= 2 && j <= nr - 2) {
                v = (at(j - 2) - 8.0 * at(j - 1) + 8.0 * at(j + 1) - at(j + 2)) / (12.0 * dr);
            } else if (j <= 1) {
                if (j == 0)
                    v = (-25.0 * at(0) + 48.0 * at(1) - 36.0 * at(2) + 16.0 * at(3) - 3.0 * at(4)) / (12.0 * dr);
                else
                    v = (-3.0 * at(0) - 10.0 * at(1) + 18.0 * at(2) - 6.0 * at(3) + at(4)) / (12.0 * dr);
            } else {
                if (j == nr)
                    v = (25.0 * at(nr) - 48.0 * at(nr - 1) + 36.0 * at(nr - 2) - 16.0 * at(nr - 3) +
                         3.0 * at(nr - 4)) /
                        (12.0 * dr);
                else
                    v = (3.0 * at(nr) + 10.0 * at(nr - 1) - 18.0 * at(nr - 2) + 6.0 * at(nr - 3) - at(nr - 4)) /
                        (12.0 * dr);
            }
            du[static_cast<std::size_t>(j)] = v;
        }

        sol.psi[static_cast<std::size_t>(m)] = std::move(u);
        sol.dpsi[static_cast<std::size_t>(m)] = std::move(du);
    });

    return sol;
}

stream_solution poisson_solve(const quarter_grid& omega, const disk_spec& disk) {
    return poisson_solve([&omega](vec2 p) { return omega.sample(p.x, p.y); }, disk);
}

namespace {

// weight of mode m in the hermitian half-spectrum reconstruction
double mode_weight(int m, int nt) { return (m == 0 || m == nt / 2) ? 1.0 : 2.0; }

// interpolate a complex mode profile at radius r (node units s = r / dr)
std::complex<double> interp_mode(const std::vector<std::complex<double>>& prof, double s, int nr) {
    const int j0 = window_start(s, nr);
    double w[4];
    lagrange4(s - j0, w);
    std::complex<double> v{};
    for (int a = 0; a < 4; ++a) v += w[a] * prof[static_cast<std::size_t>(j0 + a)];
    return v;
}

vec2 origin_velocity(const stream_solution& s) {
    // only the m = 1 mode carries a stream gradient at the center
    const int nt = s.disk.n_angular;
    if (static_cast<int>(s.dpsi.size()) < 2) return {};
    const std::complex<double> d1 = s.dpsi[1][0] * (mode_weight(1, nt) / nt);
    const double gx = d1.real();
    const double gy = -d1.imag();
    return {-gy, gx};
}

}  // namespace

double stream_solution::psi_at(vec2 p) const {
    const int nr = disk.n_radial;
    const int nt = disk.n_angular;
    const double r = norm(p);
    if (!(r < disk.radius)) return 0.0;  // rim, outside, or non-finite
    const double th = std::atan2(p.y, p.x);
    const double s = r / disk.dr();

    const std::complex<double> rot{std::cos(th), std::sin(th)};
    std::complex<double> phase{1.0, 0.0};
    double acc = 0.0;
    for (int m = 0; m <= nt / 2; ++m) {
        const std::complex<double> pm = interp_mode(psi[static_cast<std::size_t>(m)], s, nr);
        acc += mode_weight(m, nt) * (pm * phase).real();
        phase *= rot;
    }
    return acc / nt;
}

vec2 stream_solution::velocity(vec2 p) const {
    const int nr = disk.n_radial;
    const int nt = disk.n_angular;
    const double r = norm(p);
    if (!(r <= disk.radius)) return {};  // outside the disk or non-finite
    if (r < 1e-12) return origin_velocity(*this);
    const double th = std::atan2(p.y, p.x);
    const double s = r / disk.dr();

    const std::complex<double> rot{std::cos(th), std::sin(th)};
    std::complex<double> phase{1.0, 0.0};
    double psi_th = 0.0;  // d psi / d theta
    double psi_r = 0.0;   // d psi / d r
    for (int m = 0; m <= nt / 2; ++m) {
        const std::complex<double> pm = interp_mode(psi[static_cast<std::size_t>(m)], s, nr);
        const std::complex<double> dm = interp_mode(dpsi[static_cast<std::size_t>(m)], s, nr);
        const double w = mode_weight(m, nt);
        psi_th += w * (std::complex<double>{0.0, static_cast<double>(m)} * pm * phase).real();
        psi_r += w * (dm * phase).real();
        phase *= rot;
    }
    psi_th /= nt;
    psi_r /= nt;

    const double u_r = -psi_th / r;
    const double u_th = psi_r;
    const double c = std::cos(th), sn = std::sin(th);
    return {u_r * c - u_th * sn, u_r * sn + u_th * c};
}

std::vector<vec2> velocity_from_stream(const stream_solution& s, const std::vector<vec2>& points) {
    std::vector<vec2> out(points.size());
    parallel_for(static_cast<long>(points.size()),
                         [&](long i) { out[static_cast<std::size_t>(i)] = s.velocity(points[static_cast<std::size_t>(i)]); });
    return out;
}

polar_velocity velocity_table(const stream_solution& s) {
    const int nr = s.disk.n_radial;
    const int nt = s.disk.n_angular;
    polar_velocity tab;
    tab.disk = s.disk;
    tab.u_r.assign((static_cast<std::size_t>(nr) + 1) * nt, 0.0);
    tab.u_th.assign((static_cast<std::size_t>(nr) + 1) * nt, 0.0);

    parallel_for(nr + 1, [&](long j) {
        std::vector<std::complex<double>> spec_r(static_cast<std::size_t>(nt));
        std::vector<std::complex<double>> spec_t(static_cast<std::size_t>(nt));
        if (j == 0) {
            const vec2 u0 = origin_velocity(s);
            for (int k = 0; k < nt; ++k) {
                const double th = k * s.disk.dtheta();
                const double c = std::cos(th), sn = std::sin(th);
                tab.u_r[static_cast<std::size_t>(k)] = u0.x * c + u0.y * sn;
                tab.u_th[static_cast<std::size_t>(k)] = -u0.x * sn + u0.y * c;
            }
            return;
        }
        const double r = j * s.disk.dr();
        for (int m = 0; m <= nt / 2; ++m) {
            const std::complex<double> pm = s.psi[static_cast<std::size_t>(m)][static_cast<std::size_t>(j)];
            const std::complex<double> dm = s.dpsi[static_cast<std::size_t>(m)][static_cast<std::size_t>(j)];
            const std::complex<double> vr = std::complex<double>{0.0, -static_cast<double>(m) / r} * pm;
            spec_r[static_cast<std::size_t>(m)] = vr;
            spec_t[static_cast<std::size_t>(m)] = dm;
            if (m > 0 && m < nt / 2) {
                spec_r[static_cast<std::size_t>(nt - m)] = std::conj(vr);
                spec_t[static_cast<std::size_t>(nt - m)] = std::conj(dm);
            }
        }
        fft_inverse(spec_r);
        fft_inverse(spec_t);
        const std::size_t base = static_cast<std::size_t>(j) * nt;
        for (int k = 0; k < nt; ++k) {
            tab.u_r[base + k] = spec_r[static_cast<std::size_t>(k)].real();
            tab.u_th[base + k] = spec_t[static_cast<std::size_t>(k)].real();
        }
    });

    return tab;
}

vec2 polar_velocity::cartesian_velocity(vec2 p) const {
    const int nr = disk.n_radial;
    const int nt = disk.n_angular;
    const double r = norm(p);
    if (!(r <= disk.radius)) return {};  // outside the disk or non-finite
    const double th_raw = std::atan2(p.y, p.x);
    const double th = th_raw < 0.0 ? th_raw + two_pi : th_raw;

    const double sr = r / disk.dr();
    const double st = th / disk.dtheta();
    const int jr = window_start(sr, nr);
    int kt = static_cast<int>(std::floor(st)) - 1;
    double wr[4], wt[4];
    lagrange4(sr - jr, wr);
    lagrange4(st - kt, wt);

    double vr = 0.0, vt = 0.0;
    for (int a = 0; a < 4; ++a) {
        const std::size_t row = static_cast<std::size_t>(jr + a) * nt;
        double acc_r = 0.0, acc_t = 0.0;
        for (int b = 0; b < 4; ++b) {
            const int k = ((kt + b) % nt + nt) % nt;
            acc_r += wt[b] * u_r[row + static_cast<std::size_t>(k)];
            acc_t += wt[b] * u_th[row + static_cast<std::size_t>(k)];
        }
        vr += wr[a] * acc_r;
        vt += wr[a] * acc_t;
    }

    const double c = std::cos(th), sn = std::sin(th);
    return {vr * c - vt * sn, vr * sn + vt * c};
}

}  // namespace capssc
