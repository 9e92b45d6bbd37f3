#pragma once
// Business-cycle detection, growth estimation, sweeps and dwell statistics
// on daily-resolution output series.

#include <cstdint>
#include <string>
#include <vector>

#include "bizcycle/integrator.hpp"
#include "bizcycle/params.hpp"

namespace bizcycle {

// ---------------------------------------------------------------------------
//  detrending and trough detection
// ---------------------------------------------------------------------------

// Centered moving average over a window of window_years * 250 samples
// (rounded to odd); edges where the window does not fit are dropped.
struct DetrendResult {
    std::vector<double> t_days;    // interior support
    std::vector<double> residual;  // series minus centered MA
};
DetrendResult detrend(const std::vector<double>& t_days, const std::vector<double>& series,
                      double window_years);

// Trough times [days].  Pipeline: 2-year centered MA smooth -> strict local
// minima -> two-sided topographic prominence >= min_prominence (default
// 0.25 * std of the smoothed series; the two-sided walk also enforces
// trough/peak alternation) -> greedy deepest-first minimum separation of
// twice the smoothing window (the documented resolution floor).
std::vector<double> find_troughs(const DetrendResult& detrended,
                                 double smooth_window_years = 2.0,
                                 double min_prominence = -1.0);

struct CycleStats {
    std::vector<double> trough_times_years;
    std::vector<double> lengths_years;   // successive trough gaps
    std::vector<double> bin_edges_years; // 2-year bins anchored at 0
    std::vector<long> counts;
    int modal_bin = -1;                  // index into counts, -1 when empty
};

CycleStats make_cycle_stats(const std::vector<double>& trough_days, double bin_width_years = 2.0);

// Reference long run: integrator defaults (Heun, dt=1/8, daily records),
// burn-in 5000 days, expansion-equilibrium start, default noise with the
// given seed.
Trajectory standard_run(long sim_years, const Params& params, std::uint64_t seed);

// Full pipeline: standard_run, detrend 12 years, find troughs, histogram.
CycleStats cycle_histogram(long sim_years, const Params& params, std::uint64_t seed);

// ---------------------------------------------------------------------------
//  growth and dwell statistics
// ---------------------------------------------------------------------------

struct GrowthEstimate {
    double lambda = 0.0;        // annualized OLS slope [1/year]
    double stderr_ = 0.0;       // annualized slope standard error
    double window_years = 0.0;
};

// OLS slope of series vs time, annualized at 250 days/year.
GrowthEstimate growth_rate(const std::vector<double>& t_days, const std::vector<double>& series);

struct SweepPoint {
    double epsilon = 0.0;
    double lambda = 0.0;
    double stderr_ = 0.0;  // joint: mean fit SE and seed spread combined
    bool ok = false;
    std::string error;
};

// lambda(epsilon) with common random numbers: the same seed set drives every
// grid point, so adjacent points differ by epsilon alone.  Per-point failures
// are reported in-place and the sweep continues.
std::vector<SweepPoint> epsilon_sweep(const std::vector<double>& epsilon_grid,
                                      long years_per_point, const Params& params,
                                      const std::vector<std::uint64_t>& seeds);

struct DwellStats {
    double expansion_share = 0.0;
    double contraction_share = 0.0;
    double mean_dwell_expansion_years = 0.0;
    double mean_dwell_contraction_years = 0.0;
    double lambda = 0.0;  // regime threshold used (annualized)
};

// Classifies each interior day by sign of (2-year-smoothed dy/dt) - lambda,
// with lambda taken from the same trajectory's growth_rate; dy/dt is
// evaluated from z via the output equation, not by differencing.
DwellStats dwell_asymmetry(const Trajectory& traj, const Params& params);

}  // namespace bizcycle
