#include "capssc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace capssc {

namespace {

constexpr double pi = std::numbers::pi;

double signed_area(const std::vector<vec2>& v) {
    double a = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const vec2 p = v[i], q = v[(i + 1) % v.size()];
        a += cross(p, q);
    }
    return 0.5 * a;
}

bool segments_intersect(vec2 a, vec2 b, vec2 c, vec2 d) {
    const double d1 = cross(b - a, c - a);
    const double d2 = cross(b - a, d - a);
    const double d3 = cross(d - c, a - c);
    const double d4 = cross(d - c, b - c);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

double point_segment_distance(vec2 p, vec2 a, vec2 b) {
    const vec2 ab = b - a;
    const double len2 = norm2(ab);
    double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return dist(p, a + t * ab);
}

}  // namespace

planar_curve::planar_curve(std::vector<vec2> verts, bool check_simple) : vertices(std::move(verts)) {
    const std::size_t n = vertices.size();
    if (n < 3) throw std::invalid_argument("planar_curve: need at least 3 vertices");
    for (std::size_t i = 0; i < n; ++i)
        if (dist(vertices[i], vertices[(i + 1) % n]) == 0.0)
            throw std::invalid_argument("planar_curve: consecutive vertices coincide");
    if (signed_area(vertices) <= 0.0)
        throw std::invalid_argument("planar_curve: vertices must be counter-clockwise");
    if (check_simple) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;  // adjacent share a vertex
                if (segments_intersect(vertices[i], vertices[(i + 1) % n], vertices[j],
                                       vertices[(j + 1) % n]))
                    throw std::invalid_argument("planar_curve: self-intersecting polyline");
            }
        }
    }
}

double curve_length(const planar_curve& c) {
    double L = 0.0;
    const auto& v = c.vertices;
    for (std::size_t i = 0; i < v.size(); ++i) L += dist(v[i], v[(i + 1) % v.size()]);
    return L;
}

double enclosed_area(const planar_curve& c) { return signed_area(c.vertices); }

// --- smallest enclosing circle (Welzl, incremental) ------------------------

namespace {

bool circle_contains(const circle& c, vec2 p, double eps) {
    return dist(c.center, p) <= c.radius + eps;
}

circle circle_from2(vec2 a, vec2 b) { return {0.5 * (a + b), 0.5 * dist(a, b)}; }

circle circle_from3(vec2 a, vec2 b, vec2 c) {
    const double d = 2.0 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
    if (std::fabs(d) < 1e-14 * (norm2(a) + norm2(b) + norm2(c) + 1.0)) {
        // nearly collinear: fall back to the widest pair
        circle best = circle_from2(a, b);
        for (const auto& cand : {circle_from2(a, c), circle_from2(b, c)})
            if (cand.radius > best.radius) best = cand;
        return best;
    }
    const double a2 = norm2(a), b2 = norm2(b), c2 = norm2(c);
    const vec2 center{(a2 * (b.y - c.y) + b2 * (c.y - a.y) + c2 * (a.y - b.y)) / d,
                      (a2 * (c.x - b.x) + b2 * (a.x - c.x) + c2 * (b.x - a.x)) / d};
    return {center, dist(center, a)};
}

}  // namespace

circle circumcircle(const planar_curve& c) {
    std::vector<vec2> pts = c.vertices;
    std::mt19937_64 rng(0x9e3779b97f4a7c15ull);  // fixed shuffle: deterministic output
    std::shuffle(pts.begin(), pts.end(), rng);

    double scale = 0.0;
    for (const auto& p : pts) scale = std::max(scale, std::fabs(p.x) + std::fabs(p.y));
    const double eps = 1e-12 * std::max(scale, 1.0);

    circle best{pts[0], 0.0};
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (circle_contains(best, pts[i], eps)) continue;
        best = {pts[i], 0.0};
        for (std::size_t j = 0; j < i; ++j) {
            if (circle_contains(best, pts[j], eps)) continue;
            best = circle_from2(pts[i], pts[j]);
            for (std::size_t k = 0; k < j; ++k) {
                if (circle_contains(best, pts[k], eps)) continue;
                best = circle_from3(pts[i], pts[j], pts[k]);
            }
        }
    }
    return best;
}

// --- largest inscribed circle ----------------------------------------------

bool point_inside_curve(const planar_curve& c, vec2 p) {
    // crossing-number test
    bool inside = false;
    const auto& v = c.vertices;
    const std::size_t n = v.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const bool crosses = (v[i].y > p.y) != (v[j].y > p.y);
        if (crosses) {
            const double x_at = v[j].x + (v[i].x - v[j].x) * (p.y - v[j].y) / (v[i].y - v[j].y);
            if (p.x < x_at) inside = !inside;
        }
    }
    return inside;
}

double distance_to_curve(const planar_curve& c, vec2 p) {
    double d = std::numeric_limits<double>::infinity();
    const auto& v = c.vertices;
    for (std::size_t i = 0; i < v.size(); ++i)
        d = std::min(d, point_segment_distance(p, v[i], v[(i + 1) % v.size()]));
    return d;
}

circle incircle(const planar_curve& c) {
    const auto& v = c.vertices;
    vec2 lo = v[0], hi = v[0];
    for (const auto& p : v) {
        lo.x = std::min(lo.x, p.x);
        lo.y = std::min(lo.y, p.y);
        hi.x = std::max(hi.x, p.x);
        hi.y = std::max(hi.y, p.y);
    }

    struct cand {
        vec2 p;
        double d;
    };
    const int lattice = 48;
    const double dx = (hi.x - lo.x) / (lattice + 1), dy = (hi.y - lo.y) / (lattice + 1);
    std::vector<cand> seeds;
    for (int j = 1; j <= lattice; ++j)
        for (int i = 1; i <= lattice; ++i) {
            const vec2 p{lo.x + i * dx, lo.y + j * dy};
            if (!point_inside_curve(c, p)) continue;
            seeds.push_back({p, distance_to_curve(c, p)});
        }
    if (seeds.empty()) throw std::runtime_error("incircle: no interior lattice point found");
    std::sort(seeds.begin(), seeds.end(), [](const cand& a, const cand& b) { return a.d > b.d; });

    // keep a few well-separated basins and refine each by pattern search
    std::vector<cand> basins;
    const double sep = 4.0 * std::max(dx, dy);
    for (const auto& s : seeds) {
        bool close = false;
        for (const auto& b : basins)
            if (dist(b.p, s.p) < sep) close = true;
        if (!close) basins.push_back(s);
        if (basins.size() >= 8) break;
    }

    cand best{seeds[0].p, seeds[0].d};
    for (auto b : basins) {
        double step = std::max(dx, dy);
        for (int round = 0; round < 60; ++round) {
            bool improved = false;
            for (int sj = -1; sj <= 1; ++sj)
                for (int si = -1; si <= 1; ++si) {
                    if (si == 0 && sj == 0) continue;
                    const vec2 q{b.p.x + si * step, b.p.y + sj * step};
                    if (!point_inside_curve(c, q)) continue;
                    const double dq = distance_to_curve(c, q);
                    if (dq > b.d) {
                        b = {q, dq};
                        improved = true;
                    }
                }
            if (!improved) step *= 0.5;
            if (step < 1e-10) break;
        }
        if (b.d > best.d) best = b;
    }
    return {best.p, best.d};
}

curve_metrics bonnesen_check(const planar_curve& c) {
    curve_metrics m;
    m.length = curve_length(c);
    m.area = enclosed_area(c);
    m.circumradius = circumcircle(c).radius;
    m.inradius = incircle(c).radius;
    m.deficit = m.length * m.length - 4.0 * pi * m.area;
    m.bonnesen_rhs = pi * pi * (m.circumradius - m.inradius);
    m.satisfied = m.deficit >= m.bonnesen_rhs - bonnesen_tolerance;
    return m;
}

annulus_certificate annulus_certify(const planar_curve& c, double delta) {
    if (!(delta > 0.0) || delta >= 2.0 * pi / 27.0)
        throw std::invalid_argument("annulus_certify: delta must lie in (0, 2*pi/27)");
    annulus_certificate cert;
    cert.delta = delta;
    cert.inner_radius = 2.0 - 27.0 * delta / pi;
    cert.outer_radius = 2.0 + 9.0 * delta / pi;
    cert.contained = true;
    for (const auto& p : c.vertices) {
        const double r = norm(p);
        if (r < cert.inner_radius || r > cert.outer_radius) cert.contained = false;
    }
    const circle outer = circumcircle(c);
    const circle inner = incircle(c);
    cert.r_minus_rho = outer.radius - inner.radius;
    cert.deficiency_bound = 9.0 * delta / pi;
    cert.deficiency_ok = cert.r_minus_rho < cert.deficiency_bound + 1e-4;
    return cert;
}

double reflective_symmetry_defect(const planar_curve& c) {
    double worst = 0.0;
    for (int axis = 0; axis < 2; ++axis) {
        for (const auto& p : c.vertices) {
            const vec2 q = axis == 0 ? vec2{p.x, -p.y} : vec2{-p.x, p.y};
            worst = std::max(worst, distance_to_curve(c, q));
        }
    }
    return worst;
}

// --- generators -------------------------------------------------------------

planar_curve random_convex_polygon(std::mt19937_64& rng, int min_pts, int max_pts, double box_half) {
    std::uniform_int_distribution<int> count(min_pts, max_pts);
    std::uniform_real_distribution<double> coord(-box_half, box_half);
    for (;;) {
        const int n = count(rng);
        std::vector<vec2> pts(static_cast<std::size_t>(n));
        for (auto& p : pts) {
            p.x = coord(rng);
            p.y = coord(rng);
        }
        // Andrew monotone chain
        std::sort(pts.begin(), pts.end(),
                  [](vec2 a, vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
        std::vector<vec2> hull;
        auto build = [&](auto begin, auto end) {
            const std::size_t base = hull.size();
            for (auto it = begin; it != end; ++it) {
                while (hull.size() >= base + 2 &&
                       cross(hull.back() - hull[hull.size() - 2], *it - hull[hull.size() - 2]) <= 0.0)
                    hull.pop_back();
                hull.push_back(*it);
            }
            hull.pop_back();
        };
        build(pts.begin(), pts.end());
        build(pts.rbegin(), pts.rend());
        if (hull.size() >= 3 && signed_area(hull) > 1e-12) return planar_curve(hull, false);
    }
}

planar_curve random_symmetric_curve(std::mt19937_64& rng, double delta, double budget_fraction,
                                    int n_vertices) {
    std::uniform_real_distribution<double> unit(0.2, 1.0);
    std::uniform_int_distribution<int> coin(0, 1);
    const int modes[3] = {2, 4, 6};
    double amp[3];
    for (int k = 0; k < 3; ++k) amp[k] = unit(rng) * (coin(rng) ? 1.0 : -1.0);

    auto build = [&](double scale) {
        std::vector<vec2> verts(static_cast<std::size_t>(n_vertices));
        for (int i = 0; i < n_vertices; ++i) {
            const double th = 2.0 * pi * i / n_vertices;
            double r = 1.0;
            for (int k = 0; k < 3; ++k) r += scale * amp[k] * std::cos(modes[k] * th);
            verts[static_cast<std::size_t>(i)] = {r * std::cos(th), r * std::sin(th)};
        }
        const double area = signed_area(verts);
        const double factor = std::sqrt(4.0 * pi / area);
        for (auto& p : verts) p = factor * p;
        return verts;
    };
    auto excess = [&](double scale) {
        const auto verts = build(scale);
        double L = 0.0;
        for (std::size_t i = 0; i < verts.size(); ++i)
            L += dist(verts[i], verts[(i + 1) % verts.size()]);
        return L - 4.0 * pi;
    };

    const double target = budget_fraction * delta;
    double lo = 0.0, hi = 0.05;
    while (excess(hi) < target && hi < 0.45) hi *= 1.5;
    for (int it = 0; it < 64; ++it) {
        const double mid = 0.5 * (lo + hi);
        (excess(mid) < target ? lo : hi) = mid;
    }
    return planar_curve(build(lo), false);  // lo side keeps L - 4*pi <= target
}

}  // namespace capssc
