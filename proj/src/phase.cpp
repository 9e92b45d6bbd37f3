#include "bizcycle/phase.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bizcycle {

namespace {

// --------------------------------------------------------------------------
//  shared root-scan helper: sign changes of g on a dense grid + bisection
// --------------------------------------------------------------------------
template <typename Fn>
std::vector<double> scan_roots(Fn g, double lo, double hi, int grid_points) {
    std::vector<double> roots;
    const double dx = (hi - lo) / (grid_points - 1);
    double x_prev = lo;
    double g_prev = g(lo);
    for (int i = 1; i < grid_points; ++i) {
        const double x = lo + i * dx;
        const double gx = g(x);
        if (g_prev == 0.0) {
            roots.push_back(x_prev);
        } else if (gx != 0.0 && std::signbit(gx) != std::signbit(g_prev)) {
            double a = x_prev, b = x, ga = g_prev;
            for (int it = 0; it < 200; ++it) {
                const double m = 0.5 * (a + b);
                const double gm = g(m);
                if (gm == 0.0) {
                    a = b = m;
                    break;
                }
                if (std::signbit(gm) == std::signbit(ga)) {
                    a = m;
                    ga = gm;
                } else {
                    b = m;
                }
            }
            roots.push_back(0.5 * (a + b));
        }
        x_prev = x;
        g_prev = gx;
    }
    if (g_prev == 0.0) roots.push_back(x_prev);
    // drop duplicates from exact-zero grid hits
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [](double a, double b) { return std::fabs(a - b) < 1e-9; }),
                roots.end());
    return roots;
}

BoundedDeriv rhs0(const BoundedState& st, const Params& p) { return bounded_rhs(st, 0.0, p); }

double residual_norm(const BoundedState& st, const Params& p) {
    const BoundedDeriv d = rhs0(st, p);
    return std::max({std::fabs(d.hdot), std::fabs(d.sdot), std::fabs(d.zdot)});
}

}  // namespace

const char* stability_name(StabilityClass c) {
    switch (c) {
        case StabilityClass::stable_focus_node: return "stable_focus_node";
        case StabilityClass::saddle: return "saddle";
        default: return "other";
    }
}

StabilityClass classify(const std::array<std::complex<double>, 3>& eigenvalues) {
    int neg = 0, pos = 0;
    for (const auto& ev : eigenvalues) {
        if (ev.real() < 0.0) ++neg;
        if (ev.real() > 0.0) ++pos;
    }
    if (neg == 3) return StabilityClass::stable_focus_node;
    if (neg > 0 && pos > 0) return StabilityClass::saddle;
    return StabilityClass::other;
}

std::array<std::array<double, 3>, 3> bounded_jacobian(const BoundedState& st, const Params& p) {
    std::array<std::array<double, 3>, 3> J{};
    const double base[3] = {st.h, st.s, st.z};
    for (int j = 0; j < 3; ++j) {
        const double step = 1e-6 * std::max(1.0, std::fabs(base[j]));
        BoundedState hi = st, lo = st;
        double* hi_x = j == 0 ? &hi.h : j == 1 ? &hi.s : &hi.z;
        double* lo_x = j == 0 ? &lo.h : j == 1 ? &lo.s : &lo.z;
        *hi_x += step;
        *lo_x -= step;
        const BoundedDeriv dh = rhs0(hi, p);
        const BoundedDeriv dl = rhs0(lo, p);
        J[0][j] = (dh.hdot - dl.hdot) / (2.0 * step);
        J[1][j] = (dh.sdot - dl.sdot) / (2.0 * step);
        J[2][j] = (dh.zdot - dl.zdot) / (2.0 * step);
    }
    return J;
}

std::vector<EquilibriumPoint> find_equilibria(const Params& p) {
    p.validate();
    const double scale = p.tau_y * p.c2;

    // line constraint e^z = b + tau_y*c2*(s - s_star) requires a positive rhs
    auto line_arg = [&](double s) { return p.b + scale * (s - p.s_star); };
    double lo = -1.0, hi = 1.0;
    if (line_arg(lo) <= 0.0) {
        // leftmost admissible s, nudged inside
        lo = p.s_star - p.b / scale + 1e-9;
        if (lo >= hi) throw std::runtime_error("find_equilibria: empty admissible s range");
    }

    auto h_of_s = [&](double s) {
        return std::tanh((p.k1 + p.k2) * p.c2 * (s - p.s_star) + p.epsilon);
    };
    auto g = [&](double s) { return -s + std::tanh(p.beta1 * s + p.beta2 * h_of_s(s)); };

    std::vector<EquilibriumPoint> out;
    for (double s_root : scan_roots(g, lo, hi, 20001)) {
        BoundedState st;
        st.s = s_root;
        st.h = h_of_s(s_root);
        st.z = std::log(line_arg(s_root));

        // Newton polish on the full 3-D field
        for (int it = 0; it < 50; ++it) {
            const BoundedDeriv d = rhs0(st, p);
            Eigen::Vector3d f(d.hdot, d.sdot, d.zdot);
            if (f.lpNorm<Eigen::Infinity>() < 1e-15) break;
            const auto Ja = bounded_jacobian(st, p);
            Eigen::Matrix3d J;
            for (int r = 0; r < 3; ++r)
                for (int c = 0; c < 3; ++c) J(r, c) = Ja[r][c];
            const Eigen::Vector3d dx = J.partialPivLu().solve(f);
            st.h -= dx(0);
            st.s -= dx(1);
            st.z -= dx(2);
        }
        if (residual_norm(st, p) > 1e-10) continue;  // spurious bracket

        EquilibriumPoint eq;
        eq.state = st;
        const auto Ja = bounded_jacobian(st, p);
        Eigen::Matrix3d J;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) J(r, c) = Ja[r][c];
        Eigen::EigenSolver<Eigen::Matrix3d> es(J);
        for (int i = 0; i < 3; ++i) eq.eigenvalues[i] = es.eigenvalues()(i);
        std::sort(eq.eigenvalues.begin(), eq.eigenvalues.end(),
                  [](const std::complex<double>& a, const std::complex<double>& b) {
                      return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
                  });
        eq.classification = classify(eq.eigenvalues);
        out.push_back(eq);
    }
    std::sort(out.begin(), out.end(),
              [](const EquilibriumPoint& a, const EquilibriumPoint& b) {
                  return a.state.s < b.state.s;
              });
    return out;
}

FullState expansion_start(const Params& p) {
    const auto eqs = find_equilibria(p);
    const EquilibriumPoint* best = nullptr;
    for (const auto& eq : eqs)
        if (eq.classification == StabilityClass::stable_focus_node &&
            (!best || eq.state.s > best->state.s))
            best = &eq;
    if (!best) throw std::runtime_error("expansion_start: no stable equilibrium found");
    return {best->state.h, best->state.s, 0.0, -best->state.z};
}

std::vector<PitchforkRoot> sentiment_pitchfork(double beta1, int grid_points) {
    auto g = [&](double s) { return -s + std::tanh(beta1 * s); };
    std::vector<PitchforkRoot> roots;
    for (double s : scan_roots(g, -1.0, 1.0, grid_points)) {
        PitchforkRoot r;
        r.s = s;
        const double step = 1e-6;
        r.stable = (g(s + step) - g(s - step)) / (2.0 * step) < 0.0;
        roots.push_back(r);
    }
    return roots;
}

// ---------------------------------------------------------------------------
//  planar machinery
// ---------------------------------------------------------------------------

double splane_scale(const Params& p) { return std::sqrt(1.0 + p.c1 * p.c1); }

PlanarPoint project_point(double s, double h, double z, const PlaneSpec& plane, const Params& p) {
    // orthogonal projection onto z - c1*s = C in the (s, z) coordinates
    const double off = (z - p.c1 * s - plane.C) / (1.0 + p.c1 * p.c1);
    const double s_proj = s + p.c1 * off;
    return {s_proj * splane_scale(p), h};
}

std::vector<PlanarPoint> project_to_plane(const Trajectory& traj, const PlaneSpec& plane,
                                          const Params& p) {
    if (traj.z.empty()) throw std::invalid_argument("project_to_plane: needs z samples");
    std::vector<PlanarPoint> out;
    out.reserve(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i)
        out.push_back(project_point(traj.s[i], traj.h[i], traj.z[i], plane, p));
    return out;
}

PlanarDeriv planar_rhs(double s, double h, const PlaneSpec& plane, const Params& p) {
    const double z = p.c1 * s + plane.C;
    PlanarDeriv d;
    d.sdot = sentiment_rhs(s, h, p);
    const double pdot = price_rate(d.sdot, s, p);
    const double ydot = output_rhs(z, p);
    d.hdot = analyst_rhs(h, pdot, ydot, 0.0, p);
    return d;
}

namespace {

std::array<std::array<double, 2>, 2> planar_jacobian(double s, double h, const PlaneSpec& plane,
                                                     const Params& p) {
    std::array<std::array<double, 2>, 2> J{};
    const double base[2] = {s, h};
    for (int j = 0; j < 2; ++j) {
        const double step = 1e-6 * std::max(1.0, std::fabs(base[j]));
        double sh[2] = {s, h}, sl[2] = {s, h};
        sh[j] += step;
        sl[j] -= step;
        const PlanarDeriv dh = planar_rhs(sh[0], sh[1], plane, p);
        const PlanarDeriv dl = planar_rhs(sl[0], sl[1], plane, p);
        J[0][j] = (dh.sdot - dl.sdot) / (2.0 * step);
        J[1][j] = (dh.hdot - dl.hdot) / (2.0 * step);
    }
    return J;
}

}  // namespace

std::vector<PlanarEquilibrium> planar_equilibria(const PlaneSpec& plane, const Params& p) {
    auto h_of_s = [&](double s) {
        const double z = p.c1 * s + plane.C;
        return std::tanh(p.k1 * p.c2 * (s - p.s_star) + p.k2 * p.omega_y() * (std::exp(z) - p.b) +
                         p.epsilon);
    };
    auto g = [&](double s) { return -s + std::tanh(p.beta1 * s + p.beta2 * h_of_s(s)); };

    std::vector<PlanarEquilibrium> out;
    for (double s_root : scan_roots(g, -1.0, 1.0, 20001)) {
        double s = s_root, h = h_of_s(s_root);
        for (int it = 0; it < 50; ++it) {
            const PlanarDeriv d = planar_rhs(s, h, plane, p);
            if (std::max(std::fabs(d.sdot), std::fabs(d.hdot)) < 1e-15) break;
            const auto J = planar_jacobian(s, h, plane, p);
            // solve [J]{ds,dh} = {sdot,hdot}
            const double det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
            if (std::fabs(det) < 1e-30) break;
            const double ds = (d.sdot * J[1][1] - d.hdot * J[0][1]) / det;
            const double dh = (d.hdot * J[0][0] - d.sdot * J[1][0]) / det;
            s -= ds;
            h -= dh;
        }
        const PlanarDeriv d = planar_rhs(s, h, plane, p);
        if (std::max(std::fabs(d.sdot), std::fabs(d.hdot)) > 1e-10) continue;

        PlanarEquilibrium eq;
        eq.s = s;
        eq.h = h;
        const auto J = planar_jacobian(s, h, plane, p);
        const double tr = J[0][0] + J[1][1];
        const double det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
        const double disc = tr * tr - 4.0 * det;
        if (disc >= 0.0) {
            const double rd = std::sqrt(disc);
            eq.eigenvalues[0] = 0.5 * (tr - rd);
            eq.eigenvalues[1] = 0.5 * (tr + rd);
        } else {
            const double id = std::sqrt(-disc);
            eq.eigenvalues[0] = {0.5 * tr, -0.5 * id};
            eq.eigenvalues[1] = {0.5 * tr, 0.5 * id};
        }
        eq.stable = eq.eigenvalues[0].real() < 0.0 && eq.eigenvalues[1].real() < 0.0;
        out.push_back(eq);
    }
    std::sort(out.begin(), out.end(),
              [](const PlanarEquilibrium& a, const PlanarEquilibrium& b) { return a.s < b.s; });
    return out;
}

namespace {

struct Vec2 {
    double s, h;
};

Vec2 planar_f(const Vec2& x, const PlaneSpec& plane, const Params& p) {
    const PlanarDeriv d = planar_rhs(x.s, x.h, plane, p);
    return {d.sdot, d.hdot};
}

// one RK4 step of dx/dt = sign * f(x)
Vec2 rk4_planar(const Vec2& x, double dt, double sign, const PlaneSpec& plane, const Params& p) {
    auto f = [&](const Vec2& v) {
        const Vec2 d = planar_f(v, plane, p);
        return Vec2{sign * d.s, sign * d.h};
    };
    const Vec2 k1 = f(x);
    const Vec2 k2 = f({x.s + 0.5 * dt * k1.s, x.h + 0.5 * dt * k1.h});
    const Vec2 k3 = f({x.s + 0.5 * dt * k2.s, x.h + 0.5 * dt * k2.h});
    const Vec2 k4 = f({x.s + dt * k3.s, x.h + dt * k3.h});
    return {x.s + dt / 6.0 * (k1.s + 2.0 * k2.s + 2.0 * k3.s + k4.s),
            x.h + dt / 6.0 * (k1.h + 2.0 * k2.h + 2.0 * k3.h + k4.h)};
}

std::vector<Vec2> trace_branch(Vec2 x, const PlaneSpec& plane, const Params& p) {
    std::vector<Vec2> pts;
    const double dt = 0.25;
    const long max_steps = 400000;
    for (long i = 0; i < max_steps; ++i) {
        const Vec2 v = planar_f(x, plane, p);
        const double speed = std::hypot(v.s, v.h);
        if (speed < 1e-12) break;  // backward-time attractor reached
        x = rk4_planar(x, dt, -1.0, plane, p);
        if (i % 2 == 0) pts.push_back(x);
        if (std::fabs(x.h) > 1.0 || std::fabs(x.s) > 1.05) {
            pts.push_back(x);  // keep the exit point for boundary interpolation
            break;
        }
    }
    return pts;
}

}  // namespace

std::vector<PlanarPoint> separatrix(const Params& p, const PlaneSpec& plane) {
    const auto eqs = planar_equilibria(plane, p);
    const PlanarEquilibrium* saddle = nullptr;
    for (const auto& eq : eqs) {
        const bool mixed = (eq.eigenvalues[0].real() < 0.0) != (eq.eigenvalues[1].real() < 0.0);
        if (eq.eigenvalues[0].imag() == 0.0 && mixed) saddle = &eq;
    }
    if (!saddle) throw std::runtime_error("separatrix: no planar saddle in this plane");

    // stable eigendirection of the 2x2 Jacobian (eigenvalue with Re < 0)
    const auto J = planar_jacobian(saddle->s, saddle->h, plane, p);
    const double lam = std::min(saddle->eigenvalues[0].real(), saddle->eigenvalues[1].real());
    // rows of (J - lam I) are orthogonal to the eigenvector; use the larger
    double r0s = J[0][0] - lam, r0h = J[0][1];
    double r1s = J[1][0], r1h = J[1][1] - lam;
    double vs, vh;
    if (std::hypot(r0s, r0h) > std::hypot(r1s, r1h)) {
        vs = -r0h;
        vh = r0s;
    } else {
        vs = -r1h;
        vh = r1s;
    }
    const double norm = std::hypot(vs, vh);
    if (norm == 0.0) throw std::runtime_error("separatrix: degenerate stable direction");
    vs /= norm;
    vh /= norm;

    const double eps = 1e-6;
    auto minus = trace_branch({saddle->s - eps * vs, saddle->h - eps * vh}, plane, p);
    auto plus = trace_branch({saddle->s + eps * vs, saddle->h + eps * vh}, plane, p);

    std::vector<PlanarPoint> poly;
    poly.reserve(minus.size() + plus.size() + 1);
    const double scale = splane_scale(p);
    for (auto it = minus.rbegin(); it != minus.rend(); ++it)
        poly.push_back({it->s * scale, it->h});
    poly.push_back({saddle->s * scale, saddle->h});
    for (const auto& q : plus) poly.push_back({q.s * scale, q.h});
    return poly;
}

// ---------------------------------------------------------------------------
//  portraits
// ---------------------------------------------------------------------------

namespace {

BoundedState rk4_bounded(const BoundedState& x, double dt, const Params& p) {
    auto f = [&](const BoundedState& v) { return bounded_rhs(v, 0.0, p); };
    const BoundedDeriv k1 = f(x);
    const BoundedDeriv k2 = f({x.h + 0.5 * dt * k1.hdot, x.s + 0.5 * dt * k1.sdot,
                               x.z + 0.5 * dt * k1.zdot});
    const BoundedDeriv k3 = f({x.h + 0.5 * dt * k2.hdot, x.s + 0.5 * dt * k2.sdot,
                               x.z + 0.5 * dt * k2.zdot});
    const BoundedDeriv k4 = f({x.h + dt * k3.hdot, x.s + dt * k3.sdot, x.z + dt * k3.zdot});
    return {x.h + dt / 6.0 * (k1.hdot + 2.0 * k2.hdot + 2.0 * k3.hdot + k4.hdot),
            x.s + dt / 6.0 * (k1.sdot + 2.0 * k2.sdot + 2.0 * k3.sdot + k4.sdot),
            x.z + dt / 6.0 * (k1.zdot + 2.0 * k2.zdot + 2.0 * k3.zdot + k4.zdot)};
}

}  // namespace

PhasePortrait phase_portrait(const Params& p, const PlaneSpec& plane, int fan_density) {
    if (fan_density < 4) throw std::invalid_argument("phase_portrait: fan_density must be >= 4");
    PhasePortrait port;
    port.plane = plane;
    port.planar_equilibria = planar_equilibria(plane, p);
    port.separatrix = bizcycle::separatrix(p, plane);

    const auto eqs3 = find_equilibria(p);
    std::vector<BoundedState> attractors;
    for (const auto& eq : eqs3) {
        port.equilibrium_projections.push_back(
            project_point(eq.state.s, eq.state.h, eq.state.z, plane, p));
        if (eq.classification == StabilityClass::stable_focus_node) attractors.push_back(eq.state);
    }

    // window: s' span of the projected stable equilibria +- 50%, h in [-1,1]
    double lo = std::numeric_limits<double>::max(), hi = -lo;
    for (std::size_t i = 0; i < eqs3.size(); ++i) {
        if (eqs3[i].classification != StabilityClass::stable_focus_node) continue;
        lo = std::min(lo, port.equilibrium_projections[i].s_prime);
        hi = std::max(hi, port.equilibrium_projections[i].s_prime);
    }
    if (lo > hi) throw std::runtime_error("phase_portrait: no stable equilibria to frame");
    const double span = hi - lo;
    const double scale = splane_scale(p);
    port.s_prime_min = std::max(lo - 0.5 * span, -scale);
    port.s_prime_max = std::min(hi + 0.5 * span, scale);

    // seeds distributed around the window perimeter
    const double w = port.s_prime_max - port.s_prime_min, hgt = 2.0;
    const double perim = 2.0 * (w + hgt);
    std::vector<PlanarPoint> seeds;
    for (int i = 0; i < fan_density; ++i) {
        double u = perim * i / fan_density;
        PlanarPoint q;
        if (u < w) {
            q = {port.s_prime_min + u, -1.0};
        } else if (u < w + hgt) {
            q = {port.s_prime_max, -1.0 + (u - w)};
        } else if (u < 2.0 * w + hgt) {
            q = {port.s_prime_max - (u - w - hgt), 1.0};
        } else {
            q = {port.s_prime_min, 1.0 - (u - 2.0 * w - hgt)};
        }
        seeds.push_back(q);
    }

    const double dt = 0.5;
    const long max_steps = 120000;  // 60k days
    const int record_every = 4;     // 2-day polyline resolution
    for (const auto& seed : seeds) {
        FanTrajectory ft;
        BoundedState x{seed.h, seed.s_prime / scale, p.c1 * seed.s_prime / scale + plane.C};
        ft.points.push_back(project_point(x.s, x.h, x.z, plane, p));
        for (long i = 0; i < max_steps; ++i) {
            x = rk4_bounded(x, dt, p);
            const double drift = std::fabs(x.z - p.c1 * x.s - plane.C);
            ft.out_of_plane_drift = std::max(ft.out_of_plane_drift, drift);
            if (i % record_every == record_every - 1)
                ft.points.push_back(project_point(x.s, x.h, x.z, plane, p));
            bool done = false;
            for (std::size_t a = 0; a < attractors.size(); ++a) {
                const double d = std::max({std::fabs(x.h - attractors[a].h),
                                           std::fabs(x.s - attractors[a].s),
                                           std::fabs(x.z - attractors[a].z)});
                if (d < 0.02) {
                    // map back to the index within the full equilibria list
                    int idx = 0;
                    for (std::size_t k = 0; k < eqs3.size(); ++k)
                        if (eqs3[k].classification == StabilityClass::stable_focus_node &&
                            std::fabs(eqs3[k].state.s - attractors[a].s) < 1e-12)
                            idx = static_cast<int>(k);
                    ft.attractor_index = idx;
                    done = true;
                    break;
                }
            }
            if (done) break;
        }
        if (!ft.points.empty()) port.fan.push_back(std::move(ft));
    }
    return port;
}

// ---------------------------------------------------------------------------
//  barriers
// ---------------------------------------------------------------------------

namespace {

// h values where the polyline crosses the vertical line s' = x
std::vector<double> vertical_crossings(const std::vector<PlanarPoint>& poly, double x) {
    std::vector<double> hs;
    for (std::size_t i = 1; i < poly.size(); ++i) {
        const double a = poly[i - 1].s_prime, b = poly[i].s_prime;
        if ((a <= x && b >= x) || (a >= x && b <= x)) {
            if (a == b) continue;
            const double t = (x - a) / (b - a);
            hs.push_back(poly[i - 1].h + t * (poly[i].h - poly[i - 1].h));
        }
    }
    return hs;
}

}  // namespace

BarrierHeight barrier_height(const Params& p, const PlaneSpec& plane) {
    const auto eqs = planar_equilibria(plane, p);
    const PlanarEquilibrium* contraction = nullptr;
    const PlanarEquilibrium* expansion = nullptr;
    const PlanarEquilibrium* saddle = nullptr;
    for (const auto& eq : eqs) {
        if (eq.stable) {
            if (!contraction || eq.s < contraction->s) contraction = &eq;
            if (!expansion || eq.s > expansion->s) expansion = &eq;
        } else {
            const bool mixed =
                (eq.eigenvalues[0].real() < 0.0) != (eq.eigenvalues[1].real() < 0.0);
            if (mixed) saddle = &eq;
        }
    }
    if (!contraction || !expansion || contraction == expansion || !saddle)
        throw std::runtime_error("barrier_height: plane lacks two attractors and a saddle");

    const auto sep = separatrix(p, plane);
    const double scale = splane_scale(p);

    auto measure = [&](const PlanarEquilibrium& att, bool& clamped) {
        const double x = att.s * scale;
        const bool upward = saddle->h > att.h;  // side on which escape happens
        double best = std::numeric_limits<double>::quiet_NaN();
        for (double h : vertical_crossings(sep, x)) {
            if (upward && h > att.h && (std::isnan(best) || h < best)) best = h;
            if (!upward && h < att.h && (std::isnan(best) || h > best)) best = h;
        }
        if (std::isnan(best)) {
            // separatrix never crosses this vertical within |h| <= 1: no
            // admissible h can trigger the transition; report the distance
            // to the domain edge
            clamped = true;
            return upward ? 1.0 - att.h : att.h + 1.0;
        }
        clamped = false;
        return std::fabs(best - att.h);
    };

    BarrierHeight bh;
    bh.C = plane.C;
    bh.expansion = measure(*expansion, bh.expansion_clamped);
    bh.contraction = measure(*contraction, bh.contraction_clamped);
    return bh;
}

std::vector<BarrierHeight> barrier_heights(const Params& p, const std::vector<PlaneSpec>& planes) {
    std::vector<BarrierHeight> out;
    out.reserve(planes.size());
    for (const auto& pl : planes) out.push_back(barrier_height(p, pl));
    return out;
}

int planar_basin_label(double s0, double h0, const PlaneSpec& plane, const Params& p,
                       const std::vector<PlanarEquilibrium>& stable_points, double dt,
                       double t_max, double tol) {
    Vec2 x{s0, h0};
    const long steps = static_cast<long>(t_max / dt);
    for (long i = 0; i < steps; ++i) {
        x = rk4_planar(x, dt, 1.0, plane, p);
        // the restricted flow keeps |s|,|h| < 1 structurally; guard anyway
        if (std::fabs(x.s) > 1.2 || std::fabs(x.h) > 1.2) return -1;
        for (std::size_t a = 0; a < stable_points.size(); ++a) {
            if (std::fabs(x.s - stable_points[a].s) < tol &&
                std::fabs(x.h - stable_points[a].h) < tol)
                return static_cast<int>(a);
        }
    }
    return -1;
}

}  // namespace bizcycle
