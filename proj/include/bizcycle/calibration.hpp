#pragma once
// Price-formation calibration: reconstruct sentiment from an expectation
// series and fit the log-price map by linear least squares.

#include <cstddef>
#include <vector>

#include "bizcycle/params.hpp"

namespace bizcycle {

// =========================================================================
//  Sentiment reconstruction
// =========================================================================

// Integrates tau_s * ds/dt = -s + tanh(beta1*s + beta2*h) over the daily
// grid, holding h constant within each day (Heun, 4 substeps per day).
// Output is aligned with the input: out[i] is the sentiment at the end of
// day i.  Requires every |h| <= 1.
std::vector<double> sentiment_from_h(const std::vector<double>& h_daily,
                                     const Params& params, double s0 = 0.0);

// =========================================================================
//  Log-price map fit
// =========================================================================

struct FitResult {
    double c1 = 0.0;
    double c2 = 0.0;
    double s_star = 0.0;    // valid only when s_star_identifiable
    double trend = 0.0;     // raw time-trend coefficient (equals -c2*s*)
    double constant = 0.0;  // affine offset (absorbs p(0))
    bool s_star_identifiable = false;

    double condition_number = 0.0;  // of the 4-column design matrix
    double residual_norm = 0.0;     // ||p_fit - p||_2
    double correlation = 0.0;       // corr(p_fit, p)
};

// Least-squares fit of log price on [s, cumsum(s), t, 1] (daily grid,
// dt = 1 day, cumsum includes the current sample):
//
//     p_i ~ c1*s_i + c2*sum_{j<=i} s_j + a3*i + const,   s* = -a3/c2.
//
// s* is reported as identifiable only when |c2| > 1e-8; otherwise the drift
// term cannot be attributed.  A rank-deficient design matrix (for example a
// constant sentiment series, which makes the cumulative column collinear
// with the time trend) throws std::runtime_error quoting the condition
// number.  Requires >= 8 samples and equal-length inputs.
FitResult fit_price_map(const std::vector<double>& s,
                        const std::vector<double>& log_price);

// Fitted log-price series implied by a fit on the same grid it came from.
std::vector<double> fitted_price(const FitResult& fit, const std::vector<double>& s);

// =========================================================================
//  End-to-end replication
// =========================================================================

struct Replication {
    FitResult fit;
    std::vector<double> sentiment;  // reconstructed from h
    std::vector<double> p_model;    // fitted log price on the same grid
};

// h series -> sentiment -> price-map fit against the observed log price.
Replication replicate_price(const std::vector<double>& h_daily,
                            const std::vector<double>& log_price,
                            const Params& params);

}  // namespace bizcycle
