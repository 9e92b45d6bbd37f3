#include "bizcycle/micro.hpp"

#include <cmath>
#include <stdexcept>

#include "bizcycle/model.hpp"

namespace bizcycle {

Population make_population(long n_agents, double s0) {
    if (n_agents < 2) throw std::invalid_argument("micro: n_agents must be >= 2");
    if (std::fabs(s0) > 1.0) throw std::invalid_argument("micro: |s0| must be <= 1");
    Population pop;
    pop.n_plus = std::lround(n_agents * 0.5 * (1.0 + s0));
    pop.n_minus = n_agents - pop.n_plus;
    return pop;
}

Population micro_step(const Population& pop, double h, const MicroParams& micro,
                      double beta1, double beta2, double dt, Rng& rng) {
    const double F = force(pop.s(), h, beta1, beta2);
    const RatePair r = transition_rates(F, micro);
    // max(rate) < 1/tau_s always, so this bound is the real validity check
    if (dt / micro.tau_s_micro > 0.1)
        throw std::invalid_argument("micro_step: dt too large, flip probability > 0.1");
    const long up = rng.binomial(pop.n_minus, r.rate_up * dt);
    const long down = rng.binomial(pop.n_plus, r.rate_down * dt);
    Population next;
    next.n_plus = pop.n_plus + up - down;
    next.n_minus = pop.n_minus - up + down;
    return next;
}

std::vector<double> micro_simulate(long n_agents, const std::vector<double>& h_series,
                                   const MicroParams& micro, double beta1, double beta2,
                                   double dt, double n_days, std::uint64_t seed, double s0) {
    if (n_agents < 100) throw std::invalid_argument("micro_simulate: n_agents must be >= 100");
    const long n_steps = std::lround(n_days / dt);
    if (static_cast<long>(h_series.size()) < n_steps)
        throw std::invalid_argument("micro_simulate: h_series shorter than the run");
    for (double h : h_series)
        if (std::fabs(h) > 1.0) throw std::invalid_argument("micro_simulate: |h| must be <= 1");

    Rng rng(seed);
    Population pop = make_population(n_agents, s0);
    std::vector<double> out;
    out.reserve(n_steps + 1);
    out.push_back(pop.s());
    for (long i = 0; i < n_steps; ++i) {
        pop = micro_step(pop, h_series[i], micro, beta1, beta2, dt, rng);
        out.push_back(pop.s());
    }
    return out;
}

std::vector<double> square_wave(double amplitude, double period_days, double n_days, double dt) {
    const long n_steps = std::lround(n_days / dt);
    std::vector<double> h(n_steps);
    for (long i = 0; i < n_steps; ++i) {
        const double phase = std::fmod(i * dt, period_days);
        h[i] = phase < 0.5 * period_days ? amplitude : -amplitude;
    }
    return h;
}

std::vector<double> mean_field_reference(const std::vector<double>& h_series, double tau_s,
                                         double beta1, double beta2, double dt, double n_days,
                                         double s0, int sub_per_step) {
    const long n_steps = std::lround(n_days / dt);
    if (static_cast<long>(h_series.size()) < n_steps)
        throw std::invalid_argument("mean_field_reference: h_series shorter than the run");
    std::vector<double> out;
    out.reserve(n_steps + 1);
    double s = s0;
    out.push_back(s);
    const double hstep = dt / sub_per_step;
    for (long i = 0; i < n_steps; ++i) {
        const double h = h_series[i];
        auto f = [&](double sv) { return (-sv + std::tanh(beta1 * sv + beta2 * h)) / tau_s; };
        for (int j = 0; j < sub_per_step; ++j) {
            const double k1 = f(s);
            const double k2 = f(s + 0.5 * hstep * k1);
            const double k3 = f(s + 0.5 * hstep * k2);
            const double k4 = f(s + hstep * k3);
            s += hstep / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        out.push_back(s);
    }
    return out;
}

MicroComparison compare_to_mean_field(long n_agents, int replicas, std::uint64_t base_seed,
                                      const MicroParams& micro, double beta1, double beta2,
                                      double dt, double n_days, double amplitude,
                                      double period_days) {
    if (replicas < 1) throw std::invalid_argument("compare_to_mean_field: replicas must be >= 1");
    const auto h = square_wave(amplitude, period_days, n_days, dt);
    const auto ref = mean_field_reference(h, micro.tau_s_micro, beta1, beta2, dt, n_days);

    MicroComparison cmp;
    cmp.n_agents = n_agents;
    cmp.replicas = replicas;
    cmp.dt = dt;
    cmp.s_ode = ref;
    cmp.s_micro.assign(ref.size(), 0.0);
    for (int r = 0; r < replicas; ++r) {
        const auto s = micro_simulate(n_agents, h, micro, beta1, beta2, dt, n_days,
                                      base_seed + static_cast<std::uint64_t>(r));
        for (std::size_t i = 0; i < s.size(); ++i) cmp.s_micro[i] += s[i];
    }
    cmp.t_days.resize(ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) {
        cmp.s_micro[i] /= replicas;
        cmp.t_days[i] = i * dt;
        cmp.sup_deviation = std::max(cmp.sup_deviation, std::fabs(cmp.s_micro[i] - ref[i]));
    }
    return cmp;
}

ScalingFit n_scaling_fit(const std::vector<long>& n_values, int replicas,
                         std::uint64_t base_seed, const MicroParams& micro, double beta1,
                         double beta2, double dt, double n_days, double amplitude,
                         double period_days) {
    if (n_values.size() < 2) throw std::invalid_argument("n_scaling_fit: need >= 2 sizes");
    const auto h = square_wave(amplitude, period_days, n_days, dt);
    const auto ref = mean_field_reference(h, micro.tau_s_micro, beta1, beta2, dt, n_days);

    ScalingFit fit;
    fit.n_agents = n_values;
    std::uint64_t seed = base_seed;
    for (long N : n_values) {
        double acc = 0.0;
        for (int r = 0; r < replicas; ++r) {
            const auto s = micro_simulate(N, h, micro, beta1, beta2, dt, n_days, seed++);
            double sup = 0.0;
            for (std::size_t i = 0; i < s.size(); ++i)
                sup = std::max(sup, std::fabs(s[i] - ref[i]));
            acc += sup;
        }
        fit.mean_sup.push_back(acc / replicas);
    }
    // least-squares slope in log-log
    const std::size_t k = n_values.size();
    double mx = 0.0, my = 0.0;
    std::vector<double> lx(k), ly(k);
    for (std::size_t i = 0; i < k; ++i) {
        lx[i] = std::log(static_cast<double>(n_values[i]));
        ly[i] = std::log(fit.mean_sup[i]);
        mx += lx[i];
        my += ly[i];
    }
    mx /= k;
    my /= k;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        num += (lx[i] - mx) * (ly[i] - my);
        den += (lx[i] - mx) * (lx[i] - mx);
    }
    fit.exponent = num / den;
    return fit;
}

}  // namespace bizcycle
