#include "bizcycle/noise.hpp"

#include <cmath>
#include <stdexcept>

#include "bizcycle/rng.hpp"

namespace bizcycle {

void NoiseConfig::validate() const {
    if (!(daily_std >= 0.0) || !std::isfinite(daily_std))
        throw std::invalid_argument("noise: daily_std must be >= 0");
    if (substeps_per_day < 1)
        throw std::invalid_argument("noise: substeps_per_day must be >= 1");
    if (!(intraday_ar_coeff >= 0.0 && intraday_ar_coeff < 1.0))
        throw std::invalid_argument("noise: intraday_ar_coeff must be in [0,1)");
    if (std::pow(intraday_ar_coeff, substeps_per_day) >= 0.01)
        throw std::invalid_argument(
            "noise: ar_coeff^substeps must stay below 0.01 (day-to-day correlation)");
}

double NoiseConfig::substep_std() const {
    // Var(daily mean) = sigma^2 * [m + 2*sum_{d=1}^{m-1} (m-d)*phi^d] / m^2
    // for a stationary AR(1) with per-sample variance sigma^2.
    const int m = substeps_per_day;
    const double phi = intraday_ar_coeff;
    double bracket = static_cast<double>(m);
    double phi_d = 1.0;
    for (int d = 1; d < m; ++d) {
        phi_d *= phi;
        bracket += 2.0 * (m - d) * phi_d;
    }
    return daily_std / std::sqrt(bracket / (static_cast<double>(m) * m));
}

NoisePath sample_path(const NoiseConfig& config, long n_days) {
    config.validate();
    if (n_days < 1) throw std::invalid_argument("noise: n_days must be >= 1");

    NoisePath path;
    path.config = config;
    path.algorithm = kRngAlgorithmId;
    const long n = n_days * config.substeps_per_day;
    path.values.assign(n, 0.0);
    if (config.daily_std == 0.0) return path;

    Rng rng(config.seed);
    const double phi = config.intraday_ar_coeff;
    const double sigma = config.substep_std();
    const double innov = sigma * std::sqrt(1.0 - phi * phi);
    double x = sigma * rng.gaussian();  // stationary start
    for (long i = 0; i < n; ++i) {
        x = phi * x + innov * rng.gaussian();
        path.values[i] = x;
    }
    return path;
}

namespace {

double autocorr(const std::vector<double>& v, double mean, long lag) {
    const long n = static_cast<long>(v.size());
    if (lag >= n) return 0.0;
    double num = 0.0;
    double den = 0.0;
    for (long i = 0; i < n; ++i) den += (v[i] - mean) * (v[i] - mean);
    for (long i = 0; i + lag < n; ++i) num += (v[i] - mean) * (v[i + lag] - mean);
    return den > 0.0 ? num / den : 0.0;
}

}  // namespace

NoiseStats path_stats(const NoisePath& path) {
    if (path.values.empty()) throw std::invalid_argument("path_stats: empty path");
    const auto& v = path.values;
    const long n = static_cast<long>(v.size());
    const int m = path.config.substeps_per_day;

    NoiseStats st;
    double sum = 0.0;
    for (double x : v) sum += x;
    st.mean = sum / n;

    const long n_days = n / m;
    if (n_days >= 2) {
        double dsum = 0.0, dsq = 0.0;
        for (long d = 0; d < n_days; ++d) {
            double acc = 0.0;
            for (int j = 0; j < m; ++j) acc += v[d * m + j];
            const double mean_d = acc / m;
            dsum += mean_d;
            dsq += mean_d * mean_d;
        }
        const double mu = dsum / n_days;
        st.daily_std = std::sqrt((dsq - n_days * mu * mu) / (n_days - 1));
    }

    st.intraday_lag1 = autocorr(v, st.mean, 1);
    st.daily_lag1 = autocorr(v, st.mean, m);
    return st;
}

}  // namespace bizcycle
