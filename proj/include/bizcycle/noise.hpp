#pragma once
// Exogenous news process xi_t on the integration grid.
//
// The calibrated statistics are daily: zero mean, std 0.4, no day-to-day
// autocorrelation.  On the substep grid we realize them as an AR(1) process
// with a small intraday correlation, scaled so the daily means have exactly
// the requested std.

#include <cstdint>
#include <string>
#include <vector>

namespace bizcycle {

struct NoiseConfig {
    double daily_std = 0.4;        // std of the daily-aggregated xi
    int substeps_per_day = 8;      // grid resolution (dt = 1/substeps)
    double intraday_ar_coeff = 0.5;  // AR(1) coefficient per substep
    std::uint64_t seed = 0;

    // Throws std::invalid_argument on violation, including the requirement
    // ar_coeff^substeps < 0.01 (implied lag-one-day autocorrelation).
    void validate() const;

    // substep std that makes the std of daily means equal daily_std
    double substep_std() const;
};

struct NoisePath {
    std::vector<double> values;  // one sample per substep
    NoiseConfig config;          // generating config echo
    std::string algorithm;       // PRNG algorithm identifier
};

// AR(1) path covering n_days at substep resolution (n_days * substeps
// samples), zero mean, stationary start.
NoisePath sample_path(const NoiseConfig& config, long n_days);

struct NoiseStats {
    double mean = 0.0;             // grid-sample mean
    double daily_std = 0.0;        // std of daily means
    double intraday_lag1 = 0.0;    // grid autocorrelation, lag 1 substep
    double daily_lag1 = 0.0;       // grid autocorrelation, lag = substeps
                                   // (the config invariant's ar^substeps)
};

NoiseStats path_stats(const NoisePath& path);

}  // namespace bizcycle
