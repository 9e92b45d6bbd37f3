#pragma once
// Equilibria, stability, planar phase portraits, separatrix and barrier
// analysis of the bounded system at xi = 0.

#include <array>
#include <complex>
#include <vector>

#include "bizcycle/integrator.hpp"
#include "bizcycle/model.hpp"
#include "bizcycle/params.hpp"

namespace bizcycle {

// ---------------------------------------------------------------------------
//  3-D equilibria
// ---------------------------------------------------------------------------

enum class StabilityClass { stable_focus_node, saddle, other };

const char* stability_name(StabilityClass c);

struct EquilibriumPoint {
    BoundedState state;
    std::array<std::complex<double>, 3> eigenvalues;
    StabilityClass classification = StabilityClass::other;
};

// Algebraic reduction at xi=0: z from e^z = b + tau_y*c2*(s - s_star), h from
// h = tanh((k1+k2)*c2*(s - s_star) + epsilon), then the scalar root problem
// s = tanh(beta1*s + beta2*h(s)) bracketed on a dense grid and bisected; each
// root lifted to 3-D, polished by Newton on bounded_rhs with a
// finite-difference Jacobian, and classified via the Jacobian spectrum.
std::vector<EquilibriumPoint> find_equilibria(const Params& p);

StabilityClass classify(const std::array<std::complex<double>, 3>& eigenvalues);

// Default long-run starting point: the expansion-side (largest-s) stable
// equilibrium lifted to the full state by p(0) = 0, so y(0) = -z*.
FullState expansion_start(const Params& p);

// central finite differences (relative step 1e-6) of bounded_rhs at xi=0
std::array<std::array<double, 3>, 3> bounded_jacobian(const BoundedState& st, const Params& p);

// Roots of -s + tanh(beta1*s) (the h==0 forcing of the sentiment equation)
// with per-root stability, found by sign-change counting on a dense grid.
struct PitchforkRoot {
    double s = 0.0;
    bool stable = false;
};
std::vector<PitchforkRoot> sentiment_pitchfork(double beta1, int grid_points = 20001);

// ---------------------------------------------------------------------------
//  planes of motion  z - c1*s = C
// ---------------------------------------------------------------------------

struct PlaneSpec {
    double C = 0.0;
};

// In-plane coordinates: h as-is; s' is the arclength coordinate along the
// line z = c1*s + C, i.e. s' = s * sqrt(1 + c1^2).  Points off the plane are
// mapped by orthogonal projection in (s, z).
struct PlanarPoint {
    double s_prime = 0.0;
    double h = 0.0;
};

double splane_scale(const Params& p);  // sqrt(1 + c1^2)
PlanarPoint project_point(double s, double h, double z, const PlaneSpec& plane, const Params& p);
std::vector<PlanarPoint> project_to_plane(const Trajectory& traj, const PlaneSpec& plane,
                                          const Params& p);

// Plane-restricted vector field: the (s, h) components of bounded_rhs
// evaluated on z = c1*s + C (the planar approximation of the Appendix).
struct PlanarDeriv {
    double sdot = 0.0;
    double hdot = 0.0;
};
PlanarDeriv planar_rhs(double s, double h, const PlaneSpec& plane, const Params& p);

struct PlanarEquilibrium {
    double s = 0.0;
    double h = 0.0;
    std::array<std::complex<double>, 2> eigenvalues;
    bool stable = false;  // both real parts < 0
};

// Same scalar-reduction-plus-Newton recipe applied to the restricted flow.
std::vector<PlanarEquilibrium> planar_equilibria(const PlaneSpec& plane, const Params& p);

// Separatrix of the restricted flow: backward-time RK4 from the planar
// saddle perturbed +-1e-6 along its stable eigendirection; both branches
// concatenated through the saddle.  Throws if the plane has no saddle.
std::vector<PlanarPoint> separatrix(const Params& p, const PlaneSpec& plane);

// ---------------------------------------------------------------------------
//  portraits and barriers
// ---------------------------------------------------------------------------

struct FanTrajectory {
    std::vector<PlanarPoint> points;   // projected polyline
    double out_of_plane_drift = 0.0;   // max |(z - c1*s) - C| along the path
    int attractor_index = -1;          // index into equilibria list, -1 = none
};

struct PhasePortrait {
    PlaneSpec plane;
    double s_prime_min = 0.0, s_prime_max = 0.0;  // window; h window is [-1,1]
    std::vector<FanTrajectory> fan;
    std::vector<PlanarPoint> separatrix;
    std::vector<PlanarEquilibrium> planar_equilibria;
    std::vector<PlanarPoint> equilibrium_projections;  // 3-D equilibria, projected
};

// Seeds fan_density starts on the window boundary, integrates the bounded
// system forward (xi=0, RK4), projects onto the plane.
PhasePortrait phase_portrait(const Params& p, const PlaneSpec& plane, int fan_density = 40);

struct BarrierHeight {
    double C = 0.0;
    double expansion = 0.0;    // |h| gap from the expansion-side attractor
    double contraction = 0.0;  // ... and from the contraction-side attractor
    bool expansion_clamped = false;    // no separatrix crossing within |h|<=1:
    bool contraction_clamped = false;  // distance to the h boundary reported
};

// Vertical (in h) distance from each stable planar attractor to the nearest
// separatrix crossing at the attractor's s'; measured toward the saddle side.
// When the separatrix never crosses that vertical within |h| <= 1, the
// transition cannot be triggered by any admissible h and the distance to the
// domain edge is reported with the clamped flag set.
BarrierHeight barrier_height(const Params& p, const PlaneSpec& plane);
std::vector<BarrierHeight> barrier_heights(const Params& p, const std::vector<PlaneSpec>& planes);

// Forward-integration basin label of the restricted flow: index of the
// stable planar equilibrium reached (-1 if none within t_max).  Test oracle
// for the separatrix; exposed for reuse by the portrait tooling.
int planar_basin_label(double s0, double h0, const PlaneSpec& plane, const Params& p,
                       const std::vector<PlanarEquilibrium>& stable_points,
                       double dt = 0.5, double t_max = 60000.0, double tol = 0.02);

}  // namespace bizcycle
