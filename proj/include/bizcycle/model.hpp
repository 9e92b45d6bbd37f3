#pragma once
// State types and the right-hand sides of the coupled market-economy model.
//
// All functions here are pure: same inputs give bit-identical outputs.
// Time unit is the business day (250 business days = 1 year).

#include <vector>

#include "bizcycle/params.hpp"

namespace bizcycle {

inline constexpr double kDaysPerYear = 250.0;

// ---------------------------------------------------------------------------
//  states
// ---------------------------------------------------------------------------

// (h, s, p, y): analyst expectation, investor sentiment, log price, log output
struct FullState {
    double h = 0.0;
    double s = 0.0;
    double p = 0.0;
    double y = 0.0;
};

// (h, s, z): z = p - y, the log price-to-output ratio
struct BoundedState {
    double h = 0.0;
    double s = 0.0;
    double z = 0.0;
};

struct FullDeriv {
    double hdot = 0.0;
    double sdot = 0.0;
    double pdot = 0.0;
    double ydot = 0.0;
};

struct BoundedDeriv {
    double hdot = 0.0;
    double sdot = 0.0;
    double zdot = 0.0;
};

struct RatePair {
    double rate_up = 0.0;    // pessimist -> optimist [1/day]
    double rate_down = 0.0;  // optimist -> pessimist [1/day]
};

// ---------------------------------------------------------------------------
//  elementary relations
// ---------------------------------------------------------------------------

// total force acting on investors
double force(double s, double h, double beta1, double beta2);

// opinion-flip rates; rate_up/rate_down == exp(alpha*F) and
// rate_up + rate_down == 1/tau_s_micro, both to ~1e-15 relative
RatePair transition_rates(double F, const MicroParams& micro);

// ds/dt = (-s + tanh(beta1*s + beta2*h)) / tau_s
double sentiment_rhs(double s, double h, const Params& p);

// dh/dt = (-h + tanh(k1*pdot + k2*ydot + epsilon + xi)) / tau_h
double analyst_rhs(double h, double pdot, double ydot, double xi, const Params& p);

// dp/dt = c1*sdot + c2*(s - s_star)
double price_rate(double sdot, double s, const Params& p);

// dy/dt = omega_y*(exp(z) - b); throws std::domain_error when |z| > 50
// (far outside any physically reachable ratio -- fail loudly, not with inf)
double output_rhs(double z, const Params& p);

// ---------------------------------------------------------------------------
//  assembled vector fields
// ---------------------------------------------------------------------------

// Cascade order: ydot from z=p-y, then sdot, then pdot(sdot), then hdot.
FullDeriv coupled_rhs(const FullState& st, double xi, const Params& p);

// Same helpers on (h, s, z); zdot is computed literally as pdot - ydot so the
// two formulations agree bit-for-bit on matching states.
BoundedDeriv bounded_rhs(const BoundedState& st, double xi, const Params& p);

// ---------------------------------------------------------------------------
//  efficient-market limit
// ---------------------------------------------------------------------------

// Daily-grid path of the instantaneous-adjustment limit:
//   h_t = epsilon + xi_t,  s_t = beta2*h_t,  dp = c2*(s_t - s_star)
// with i.i.d. gaussian daily xi (std daily_std).  p(0) = 0.
struct EfficientPath {
    std::vector<double> t_days;
    std::vector<double> h;
    std::vector<double> s;
    std::vector<double> p;
    std::vector<double> xi;
};

EfficientPath efficient_limit_path(long n_days, double epsilon, const Params& p,
                                   std::uint64_t seed, double daily_std = 0.4);

}  // namespace bizcycle
