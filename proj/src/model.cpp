#include "bizcycle/model.hpp"

#include <cmath>
#include <stdexcept>

#include "bizcycle/rng.hpp"

namespace bizcycle {

namespace {

// branch-free-in-spirit stable logistic: never evaluates exp of a positive
// large argument
double sigmoid(double x) {
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

}  // namespace

double force(double s, double h, double beta1, double beta2) {
    return beta1 * s + beta2 * h;
}

RatePair transition_rates(double F, const MicroParams& micro) {
    const double a = micro.alpha * F;
    RatePair r;
    r.rate_up = sigmoid(a) / micro.tau_s_micro;
    r.rate_down = sigmoid(-a) / micro.tau_s_micro;
    return r;
}

double sentiment_rhs(double s, double h, const Params& p) {
    return (-s + std::tanh(p.beta1 * s + p.beta2 * h)) / p.tau_s;
}

double analyst_rhs(double h, double pdot, double ydot, double xi, const Params& p) {
    return (-h + std::tanh(p.k1 * pdot + p.k2 * ydot + p.epsilon + xi)) / p.tau_h;
}

double price_rate(double sdot, double s, const Params& p) {
    return p.c1 * sdot + p.c2 * (s - p.s_star);
}

double output_rhs(double z, const Params& p) {
    if (!(std::fabs(z) <= 50.0))
        throw std::domain_error("output_rhs: |z| > 50, trajectory diverged");
    return p.omega_y() * (std::exp(z) - p.b);
}

FullDeriv coupled_rhs(const FullState& st, double xi, const Params& p) {
    FullDeriv d;
    d.ydot = output_rhs(st.p - st.y, p);
    d.sdot = sentiment_rhs(st.s, st.h, p);
    d.pdot = price_rate(d.sdot, st.s, p);
    d.hdot = analyst_rhs(st.h, d.pdot, d.ydot, xi, p);
    return d;
}

BoundedDeriv bounded_rhs(const BoundedState& st, double xi, const Params& p) {
    const double ydot = output_rhs(st.z, p);
    BoundedDeriv d;
    d.sdot = sentiment_rhs(st.s, st.h, p);
    const double pdot = price_rate(d.sdot, st.s, p);
    d.zdot = pdot - ydot;
    d.hdot = analyst_rhs(st.h, pdot, ydot, xi, p);
    return d;
}

EfficientPath efficient_limit_path(long n_days, double epsilon, const Params& p,
                                   std::uint64_t seed, double daily_std) {
    if (n_days < 1) throw std::invalid_argument("efficient_limit_path: n_days must be >= 1");
    Rng rng(seed);
    EfficientPath path;
    path.t_days.reserve(n_days);
    path.h.reserve(n_days);
    path.s.reserve(n_days);
    path.p.reserve(n_days);
    path.xi.reserve(n_days);
    double price = 0.0;
    for (long i = 0; i < n_days; ++i) {
        const double xi = daily_std * rng.gaussian();
        const double h = epsilon + xi;
        const double s = p.beta2 * h;
        price += p.c2 * (s - p.s_star);  // dt = 1 day
        path.t_days.push_back(static_cast<double>(i + 1));
        path.h.push_back(h);
        path.s.push_back(s);
        path.p.push_back(price);
        path.xi.push_back(xi);
    }
    return path;
}

}  // namespace bizcycle
