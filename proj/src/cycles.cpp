#include "bizcycle/cycles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "bizcycle/phase.hpp"

namespace bizcycle {

namespace {

int odd_window(double window_years) {
    int w = static_cast<int>(std::lround(window_years * kDaysPerYear));
    if (w % 2 == 0) ++w;
    return w;
}

// centered moving average, valid region only (length n - w + 1)
std::vector<double> centered_ma(const std::vector<double>& x, int w) {
    const long n = static_cast<long>(x.size());
    std::vector<double> out(n - w + 1);
    double acc = std::accumulate(x.begin(), x.begin() + w, 0.0);
    out[0] = acc / w;
    for (long i = 1; i + w <= n; ++i) {
        acc += x[i + w - 1] - x[i - 1];
        out[i] = acc / w;
    }
    return out;
}

}  // namespace

DetrendResult detrend(const std::vector<double>& t_days, const std::vector<double>& series,
                      double window_years) {
    if (t_days.size() != series.size()) throw std::invalid_argument("detrend: size mismatch");
    const int w = odd_window(window_years);
    if (static_cast<long>(series.size()) <= w)
        throw std::invalid_argument("detrend: series shorter than the window");
    const auto trend = centered_ma(series, w);
    const long half = (w - 1) / 2;
    DetrendResult res;
    res.t_days.assign(t_days.begin() + half, t_days.end() - half);
    res.residual.resize(trend.size());
    for (std::size_t i = 0; i < trend.size(); ++i)
        res.residual[i] = series[i + half] - trend[i];
    return res;
}

std::vector<double> find_troughs(const DetrendResult& detrended, double smooth_window_years,
                                 double min_prominence) {
    const int w = odd_window(smooth_window_years);
    if (static_cast<long>(detrended.residual.size()) <= w) return {};
    const auto sm = centered_ma(detrended.residual, w);
    const long half = (w - 1) / 2;
    const long n = static_cast<long>(sm.size());

    if (min_prominence < 0.0) {
        double mean = std::accumulate(sm.begin(), sm.end(), 0.0) / n;
        double var = 0.0;
        for (double v : sm) var += (v - mean) * (v - mean);
        min_prominence = 0.25 * std::sqrt(var / n);
    }

    // strict local minima with two-sided topographic prominence
    std::vector<long> kept;
    for (long i = 1; i + 1 < n; ++i) {
        if (!(sm[i] < sm[i - 1] && sm[i] < sm[i + 1])) continue;
        double lmax = sm[i];
        for (long j = i - 1; j >= 0 && sm[j] > sm[i]; --j) lmax = std::max(lmax, sm[j]);
        double rmax = sm[i];
        for (long j = i + 1; j < n && sm[j] > sm[i]; ++j) rmax = std::max(rmax, sm[j]);
        if (std::min(lmax, rmax) - sm[i] >= min_prominence) kept.push_back(i);
    }

    // resolution floor: deepest-first greedy separation of 2x smooth window
    const long min_sep = 2L * w;
    std::sort(kept.begin(), kept.end(), [&](long a, long b) { return sm[a] < sm[b]; });
    std::vector<long> sel;
    for (long i : kept) {
        bool ok = true;
        for (long j : sel)
            if (std::labs(i - j) < min_sep) {
                ok = false;
                break;
            }
        if (ok) sel.push_back(i);
    }
    std::sort(sel.begin(), sel.end());

    std::vector<double> times;
    times.reserve(sel.size());
    for (long i : sel) times.push_back(detrended.t_days[i + half]);
    return times;
}

CycleStats make_cycle_stats(const std::vector<double>& trough_days, double bin_width_years) {
    CycleStats cs;
    for (double t : trough_days) cs.trough_times_years.push_back(t / kDaysPerYear);
    for (std::size_t i = 1; i < cs.trough_times_years.size(); ++i)
        cs.lengths_years.push_back(cs.trough_times_years[i] - cs.trough_times_years[i - 1]);
    if (cs.lengths_years.empty()) return cs;

    const double max_len = *std::max_element(cs.lengths_years.begin(), cs.lengths_years.end());
    const int n_bins = static_cast<int>(std::floor(max_len / bin_width_years)) + 1;
    for (int i = 0; i <= n_bins; ++i) cs.bin_edges_years.push_back(i * bin_width_years);
    cs.counts.assign(n_bins, 0);
    for (double len : cs.lengths_years) {
        int b = static_cast<int>(std::floor(len / bin_width_years));
        if (b >= n_bins) b = n_bins - 1;
        ++cs.counts[b];
    }
    cs.modal_bin = static_cast<int>(
        std::max_element(cs.counts.begin(), cs.counts.end()) - cs.counts.begin());
    return cs;
}

Trajectory standard_run(long sim_years, const Params& params, std::uint64_t seed) {
    NoiseConfig ncfg;
    ncfg.seed = seed;
    SimConfig sim;
    sim.n_days = sim_years * static_cast<long>(kDaysPerYear);
    sim.burn_in_days = 5000;
    sim.initial_full = expansion_start(params);
    const NoisePath noise = sample_path(ncfg, sim.burn_in_days + sim.n_days);
    return simulate_full(params, sim, noise);
}

CycleStats cycle_histogram(long sim_years, const Params& params, std::uint64_t seed) {
    const Trajectory traj = standard_run(sim_years, params, seed);
    const DetrendResult res = detrend(traj.t_days, traj.y, 12.0);
    return make_cycle_stats(find_troughs(res));
}

GrowthEstimate growth_rate(const std::vector<double>& t_days, const std::vector<double>& series) {
    if (t_days.size() != series.size() || t_days.size() < 3)
        throw std::invalid_argument("growth_rate: bad series");
    const double window_years = (t_days.back() - t_days.front()) / kDaysPerYear;
    if (window_years < 50.0)
        throw std::invalid_argument("growth_rate: window shorter than 50 years");

    const long n = static_cast<long>(t_days.size());
    double tm = 0.0, ym = 0.0;
    for (long i = 0; i < n; ++i) {
        tm += t_days[i];
        ym += series[i];
    }
    tm /= n;
    ym /= n;
    double num = 0.0, den = 0.0;
    for (long i = 0; i < n; ++i) {
        num += (t_days[i] - tm) * (series[i] - ym);
        den += (t_days[i] - tm) * (t_days[i] - tm);
    }
    const double slope = num / den;
    double ss = 0.0;
    for (long i = 0; i < n; ++i) {
        const double r = series[i] - ym - slope * (t_days[i] - tm);
        ss += r * r;
    }
    GrowthEstimate g;
    g.lambda = slope * kDaysPerYear;
    g.stderr_ = std::sqrt(ss / (n - 2) / den) * kDaysPerYear;
    g.window_years = window_years;
    return g;
}

std::vector<SweepPoint> epsilon_sweep(const std::vector<double>& epsilon_grid,
                                      long years_per_point, const Params& params,
                                      const std::vector<std::uint64_t>& seeds) {
    if (seeds.empty()) throw std::invalid_argument("epsilon_sweep: needs at least one seed");
    for (double e : epsilon_grid)
        if (e < 0.0 || e > 0.1)
            throw std::invalid_argument("epsilon_sweep: grid must stay within [0, 0.1]");

    std::vector<SweepPoint> table;
    for (double eps : epsilon_grid) {
        SweepPoint pt;
        pt.epsilon = eps;
        try {
            Params p = params;
            p.epsilon = eps;
            std::vector<double> lambdas, fit_ses;
            for (std::uint64_t seed : seeds) {  // common seeds across the grid
                NoiseConfig ncfg;
                ncfg.seed = seed;
                SimConfig sim;
                sim.n_days = years_per_point * static_cast<long>(kDaysPerYear);
                sim.burn_in_days = 5000;
                sim.initial_full = expansion_start(p);
                const NoisePath noise = sample_path(ncfg, sim.burn_in_days + sim.n_days);
                const Trajectory traj = simulate_full(p, sim, noise);
                const GrowthEstimate g = growth_rate(traj.t_days, traj.y);
                lambdas.push_back(g.lambda);
                fit_ses.push_back(g.stderr_);
            }
            const long n = static_cast<long>(lambdas.size());
            pt.lambda = std::accumulate(lambdas.begin(), lambdas.end(), 0.0) / n;
            double fit_var = 0.0;
            for (double se : fit_ses) fit_var += se * se;
            fit_var /= n * n;
            double seed_var = 0.0;
            if (n > 1) {
                for (double l : lambdas) seed_var += (l - pt.lambda) * (l - pt.lambda);
                seed_var /= (n - 1) * n;
            }
            pt.stderr_ = std::sqrt(fit_var + seed_var);
            pt.ok = true;
        } catch (const std::exception& e) {
            pt.ok = false;
            pt.error = e.what();
        }
        table.push_back(pt);
    }
    return table;
}

DwellStats dwell_asymmetry(const Trajectory& traj, const Params& params) {
    if (traj.y.empty() || traj.z.empty())
        throw std::invalid_argument("dwell_asymmetry: needs a full-formulation trajectory");
    if (traj.t_days.back() - traj.t_days.front() < 500.0 * kDaysPerYear)
        throw std::invalid_argument("dwell_asymmetry: needs at least 500 years");

    const GrowthEstimate g = growth_rate(traj.t_days, traj.y);
    const double lambda_daily = g.lambda / kDaysPerYear;

    std::vector<double> ydot(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i) ydot[i] = output_rhs(traj.z[i], params);
    const int w = odd_window(2.0);
    const auto sm = centered_ma(ydot, w);

    DwellStats st;
    st.lambda = g.lambda;
    long n_exp = 0;
    std::vector<long> exp_runs, con_runs;
    bool cur = sm[0] > lambda_daily;
    long run = 1;
    for (std::size_t i = 1; i < sm.size(); ++i) {
        const bool e = sm[i] > lambda_daily;
        if (e == cur) {
            ++run;
        } else {
            (cur ? exp_runs : con_runs).push_back(run);
            cur = e;
            run = 1;
        }
        if (e) ++n_exp;
    }
    (cur ? exp_runs : con_runs).push_back(run);
    if (sm[0] > lambda_daily) ++n_exp;

    st.expansion_share = static_cast<double>(n_exp) / sm.size();
    st.contraction_share = 1.0 - st.expansion_share;
    auto mean_years = [](const std::vector<long>& runs) {
        if (runs.empty()) return 0.0;
        return std::accumulate(runs.begin(), runs.end(), 0.0) / runs.size() / kDaysPerYear;
    };
    st.mean_dwell_expansion_years = mean_years(exp_runs);
    st.mean_dwell_contraction_years = mean_years(con_runs);
    return st;
}

}  // namespace bizcycle
