#pragma once
// Agent-level Monte Carlo of the binary-opinion population; independent
// oracle for the mean-field sentiment equation.

#include <cstdint>
#include <vector>

#include "bizcycle/params.hpp"
#include "bizcycle/rng.hpp"

namespace bizcycle {

struct Population {
    long n_plus = 0;
    long n_minus = 0;

    long n() const { return n_plus + n_minus; }
    double s() const { return static_cast<double>(n_plus - n_minus) / n(); }
};

Population make_population(long n_agents, double s0);

// One interval dt: every pessimist flips with probability rate_up*dt, every
// optimist with rate_down*dt (subpopulation-level binomial draws -- the
// per-agent Bernoulli trials are i.i.d. within a step, so the binomial totals
// have the identical distribution at a fraction of the cost).
// Throws if dt*max(rate) > 0.1.
Population micro_step(const Population& pop, double h, const MicroParams& micro,
                      double beta1, double beta2, double dt, Rng& rng);

// Full stochastic path of mean sentiment under an exogenous h held constant
// within each step; h_series needs >= ceil(n_days/dt) entries.  Returns
// n_steps+1 values starting at s0.
std::vector<double> micro_simulate(long n_agents, const std::vector<double>& h_series,
                                   const MicroParams& micro, double beta1, double beta2,
                                   double dt, double n_days, std::uint64_t seed,
                                   double s0 = 0.0);

// h(t) square wave: +amplitude on [0, period/2), -amplitude on [period/2,
// period), one value per step of size dt.
std::vector<double> square_wave(double amplitude, double period_days, double n_days, double dt);

// Mean-field reference: RK4 on tau_s*sdot = -s + tanh(beta1*s + beta2*h)
// with h frozen per step exactly as the chain samples it; sub_per_step RK4
// substeps per micro step.  Returns n_steps+1 values.
std::vector<double> mean_field_reference(const std::vector<double>& h_series, double tau_s,
                                         double beta1, double beta2, double dt, double n_days,
                                         double s0 = 0.0, int sub_per_step = 32);

// ---------------------------------------------------------------------------
//  comparison report
// ---------------------------------------------------------------------------

struct MicroComparison {
    long n_agents = 0;
    int replicas = 0;
    double dt = 0.0;
    std::vector<double> t_days;
    std::vector<double> s_micro;  // ensemble mean over replicas
    std::vector<double> s_ode;    // mean-field reference
    double sup_deviation = 0.0;   // of the ensemble mean path
};

// Ensemble of replicas (seeds base_seed..base_seed+replicas-1) under the
// standard square-wave protocol.
MicroComparison compare_to_mean_field(long n_agents, int replicas, std::uint64_t base_seed,
                                      const MicroParams& micro, double beta1, double beta2,
                                      double dt, double n_days, double amplitude,
                                      double period_days);

struct ScalingFit {
    std::vector<long> n_agents;
    std::vector<double> mean_sup;  // per N: replica-average of single-path sup
    double exponent = 0.0;         // log-log slope
};

// Single-path sup deviations averaged over replicas at each N, log-log fit.
ScalingFit n_scaling_fit(const std::vector<long>& n_values, int replicas,
                         std::uint64_t base_seed, const MicroParams& micro, double beta1,
                         double beta2, double dt, double n_days, double amplitude,
                         double period_days);

}  // namespace bizcycle
