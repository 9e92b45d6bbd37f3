#include "bizcycle/integrator.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace bizcycle {

const char* scheme_name(Scheme s) { return s == Scheme::euler ? "euler" : "heun"; }

Scheme scheme_from_name(const std::string& name) {
    if (name == "euler") return Scheme::euler;
    if (name == "heun") return Scheme::heun;
    throw std::invalid_argument("unknown scheme: " + name);
}

void SimConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("sim: dt must be > 0");
    if (n_days < 1) throw std::invalid_argument("sim: n_days must be >= 1");
    if (record_stride < 1) throw std::invalid_argument("sim: record_stride must be >= 1");
    if (burn_in_days < 0) throw std::invalid_argument("sim: burn_in_days must be >= 0");
}

long SimConfig::total_steps() const {
    return std::lround((burn_in_days + n_days) / dt);
}

FullState step(const FullState& st, double xi, const Params& p, double dt, Scheme scheme) {
    const FullDeriv d1 = coupled_rhs(st, xi, p);
    if (scheme == Scheme::euler) {
        return {st.h + dt * d1.hdot, st.s + dt * d1.sdot,
                st.p + dt * d1.pdot, st.y + dt * d1.ydot};
    }
    const FullState pred{st.h + dt * d1.hdot, st.s + dt * d1.sdot,
                         st.p + dt * d1.pdot, st.y + dt * d1.ydot};
    const FullDeriv d2 = coupled_rhs(pred, xi, p);
    return {st.h + 0.5 * dt * (d1.hdot + d2.hdot), st.s + 0.5 * dt * (d1.sdot + d2.sdot),
            st.p + 0.5 * dt * (d1.pdot + d2.pdot), st.y + 0.5 * dt * (d1.ydot + d2.ydot)};
}

BoundedState step(const BoundedState& st, double xi, const Params& p, double dt, Scheme scheme) {
    const BoundedDeriv d1 = bounded_rhs(st, xi, p);
    if (scheme == Scheme::euler) {
        return {st.h + dt * d1.hdot, st.s + dt * d1.sdot, st.z + dt * d1.zdot};
    }
    const BoundedState pred{st.h + dt * d1.hdot, st.s + dt * d1.sdot, st.z + dt * d1.zdot};
    const BoundedDeriv d2 = bounded_rhs(pred, xi, p);
    return {st.h + 0.5 * dt * (d1.hdot + d2.hdot), st.s + 0.5 * dt * (d1.sdot + d2.sdot),
            st.z + 0.5 * dt * (d1.zdot + d2.zdot)};
}

namespace {

constexpr double kBoundSlack = 1e-6;

double state_h(const FullState& st) { return st.h; }
double state_s(const FullState& st) { return st.s; }
double state_h(const BoundedState& st) { return st.h; }
double state_s(const BoundedState& st) { return st.s; }

void check_bounds(double h, double s, long step_idx, double t) {
    if (std::fabs(s) > 1.0 + kBoundSlack || std::fabs(h) > 1.0 + kBoundSlack) {
        std::ostringstream os;
        os << "integrator: bound violation at step " << step_idx << " (t=" << t
           << " days): h=" << h << " s=" << s;
        throw std::runtime_error(os.str());
    }
}

template <typename State, typename Record>
Trajectory run(const Params& params, const SimConfig& sim, const NoisePath& noise,
               State st, Record record) {
    params.validate();
    sim.validate();
    const long steps = sim.total_steps();
    if (static_cast<long>(noise.values.size()) < steps)
        throw std::invalid_argument("integrator: noise path shorter than the run");

    const long burn_steps = std::lround(sim.burn_in_days / sim.dt);
    Trajectory traj;
    const long n_records = (steps - burn_steps) / sim.record_stride + 1;
    traj.t_days.reserve(n_records);

    for (long i = 0; i < steps; ++i) {
        if (i == burn_steps && sim.record_initial)
            record(traj, 0.0, st, i > 0 ? noise.values[i - 1] : 0.0);
        st = step(st, noise.values[i], params, sim.dt, sim.scheme);
        const long k = i + 1 - burn_steps;
        check_bounds(state_h(st), state_s(st), i + 1, k * sim.dt);
        if (k > 0 && k % sim.record_stride == 0) record(traj, k * sim.dt, st, noise.values[i]);
    }
    return traj;
}

}  // namespace

Trajectory simulate_full(const Params& params, const SimConfig& sim, const NoisePath& noise) {
    auto record = [](Trajectory& tr, double t, const FullState& st, double xi) {
        tr.t_days.push_back(t);
        tr.h.push_back(st.h);
        tr.s.push_back(st.s);
        tr.p.push_back(st.p);
        tr.y.push_back(st.y);
        tr.z.push_back(st.p - st.y);
        tr.xi.push_back(xi);
    };
    Trajectory traj = run(params, sim, noise, sim.initial_full, record);
    traj.bounded = false;
    return traj;
}

Trajectory simulate_bounded(const Params& params, const SimConfig& sim, const NoisePath& noise) {
    auto record = [](Trajectory& tr, double t, const BoundedState& st, double xi) {
        tr.t_days.push_back(t);
        tr.h.push_back(st.h);
        tr.s.push_back(st.s);
        tr.z.push_back(st.z);
        tr.xi.push_back(xi);
    };
    Trajectory traj = run(params, sim, noise, sim.initial_bounded, record);
    traj.bounded = true;
    return traj;
}

}  // namespace bizcycle
