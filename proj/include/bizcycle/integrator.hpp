#pragma once
// Fixed-step explicit integration of the coupled / bounded formulations
// driven by a NoisePath.

#include <cstdint>
#include <string>
#include <vector>

#include "bizcycle/model.hpp"
#include "bizcycle/noise.hpp"
#include "bizcycle/params.hpp"

namespace bizcycle {

enum class Scheme { euler, heun };

const char* scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);

struct SimConfig {
    double dt = 0.125;        // step [days]; keep equal to 1/substeps_per_day
    long n_days = 250;        // recorded span (after burn-in)
    Scheme scheme = Scheme::heun;
    long record_stride = 8;   // steps per recorded sample (8 -> daily)
    long burn_in_days = 0;    // discarded lead-in driven by the same noise
    bool record_initial = true;     // emit the t=0 sample (post burn-in)
    FullState initial_full{};       // used by simulate_full
    BoundedState initial_bounded{}; // used by simulate_bounded

    void validate() const;
    long total_steps() const;   // (burn_in_days + n_days) / dt, rounded
};

// Recorded samples at stride resolution; the full formulation fills
// h,s,p,y,z (z = p-y), the bounded one fills h,s,z.
struct Trajectory {
    std::vector<double> t_days;  // time since burn-in end; t=0 per record_initial
    std::vector<double> h;
    std::vector<double> s;
    std::vector<double> p;
    std::vector<double> y;
    std::vector<double> z;
    std::vector<double> xi;      // substep noise at the recorded step
    bool bounded = false;

    std::size_t size() const { return t_days.size(); }
};

// One explicit step with xi frozen across stages.
FullState step(const FullState& st, double xi, const Params& p, double dt, Scheme scheme);
BoundedState step(const BoundedState& st, double xi, const Params& p, double dt, Scheme scheme);

// Fixed-step run of the (h, s, p, y) system.  Throws std::runtime_error with
// a state dump if |s| or |h| leaves [-1-1e-6, 1+1e-6]; propagates the
// output_rhs divergence guard.
Trajectory simulate_full(const Params& params, const SimConfig& sim, const NoisePath& noise);

// Same driver on (h, s, z).
Trajectory simulate_bounded(const Params& params, const SimConfig& sim, const NoisePath& noise);

}  // namespace bizcycle
