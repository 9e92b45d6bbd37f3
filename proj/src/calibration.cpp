#include "bizcycle/calibration.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace bizcycle {

// =========================================================================
//  Sentiment reconstruction
// =========================================================================

std::vector<double> sentiment_from_h(const std::vector<double>& h_daily,
                                     const Params& params, double s0) {
    params.validate();
    if (h_daily.empty()) throw std::invalid_argument("sentiment_from_h: empty h series");
    if (!(std::fabs(s0) <= 1.0)) throw std::invalid_argument("sentiment_from_h: |s0| > 1");
    for (size_t i = 0; i < h_daily.size(); ++i) {
        if (!(std::fabs(h_daily[i]) <= 1.0))
            throw std::invalid_argument("sentiment_from_h: |h| > 1 at sample " + std::to_string(i));
    }

    constexpr int kSub = 4;  // substeps per day
    const double dt = 1.0 / kSub;
    std::vector<double> out(h_daily.size());
    double s = s0;
    for (size_t i = 0; i < h_daily.size(); ++i) {
        const double h = h_daily[i];
        auto rhs = [&](double sv) {
            return (-sv + std::tanh(params.beta1 * sv + params.beta2 * h)) / params.tau_s;
        };
        for (int k = 0; k < kSub; ++k) {
            const double d1 = rhs(s);
            const double d2 = rhs(s + dt * d1);
            s += 0.5 * dt * (d1 + d2);
        }
        out[i] = s;
    }
    return out;
}

// =========================================================================
//  Log-price map fit
// =========================================================================

namespace {

Eigen::MatrixXd design_matrix(const std::vector<double>& s) {
    const auto n = static_cast<Eigen::Index>(s.size());
    Eigen::MatrixXd a(n, 4);
    double cum = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        cum += s[static_cast<size_t>(i)];
        a(i, 0) = s[static_cast<size_t>(i)];
        a(i, 1) = cum;
        a(i, 2) = static_cast<double>(i);
        a(i, 3) = 1.0;
    }
    return a;
}

double pearson(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    const double mx = x.mean();
    const double my = y.mean();
    const Eigen::VectorXd dx = x.array() - mx;
    const Eigen::VectorXd dy = y.array() - my;
    const double denom = std::sqrt(dx.squaredNorm() * dy.squaredNorm());
    if (denom == 0.0) return 0.0;
    return dx.dot(dy) / denom;
}

}  // namespace

FitResult fit_price_map(const std::vector<double>& s, const std::vector<double>& log_price) {
    if (s.size() != log_price.size())
        throw std::invalid_argument("fit_price_map: series lengths differ");
    if (s.size() < 8) throw std::invalid_argument("fit_price_map: need at least 8 samples");
    for (double v : s)
        if (!std::isfinite(v)) throw std::invalid_argument("fit_price_map: non-finite sentiment");
    for (double v : log_price)
        if (!std::isfinite(v)) throw std::invalid_argument("fit_price_map: non-finite log price");

    const Eigen::MatrixXd a = design_matrix(s);
    Eigen::VectorXd p(static_cast<Eigen::Index>(log_price.size()));
    for (Eigen::Index i = 0; i < p.size(); ++i) p(i) = log_price[static_cast<size_t>(i)];

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double cond = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1)
                                                : std::numeric_limits<double>::infinity();
    if (!(cond < 1e12)) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.3g", cond);
        throw std::runtime_error(std::string("fit_price_map: rank-deficient design matrix"
                                             " (condition number ") +
                                 buf + ")");
    }

    const Eigen::Vector4d coef = svd.solve(p);

    FitResult fit;
    fit.c1 = coef(0);
    fit.c2 = coef(1);
    fit.trend = coef(2);
    fit.constant = coef(3);
    fit.condition_number = cond;
    // The time-trend coefficient is -c2*s*; s* is attributable only when the
    // cumulative channel is actually present.
    if (std::fabs(fit.c2) > 1e-8) {
        fit.s_star = -fit.trend / fit.c2;
        fit.s_star_identifiable = true;
    }

    const Eigen::VectorXd p_fit = a * coef;
    fit.residual_norm = (p_fit - p).norm();
    fit.correlation = pearson(p_fit, p);
    return fit;
}

std::vector<double> fitted_price(const FitResult& fit, const std::vector<double>& s) {
    std::vector<double> out(s.size());
    double cum = 0.0;
    for (size_t i = 0; i < s.size(); ++i) {
        cum += s[i];
        out[i] = fit.c1 * s[i] + fit.c2 * cum + fit.trend * static_cast<double>(i) + fit.constant;
    }
    return out;
}

// =========================================================================
//  End-to-end replication
// =========================================================================

Replication replicate_price(const std::vector<double>& h_daily,
                            const std::vector<double>& log_price, const Params& params) {
    if (h_daily.size() != log_price.size())
        throw std::invalid_argument("replicate_price: series lengths differ");
    Replication rep;
    rep.sentiment = sentiment_from_h(h_daily, params);
    rep.fit = fit_price_map(rep.sentiment, log_price);
    rep.p_model = fitted_price(rep.fit, rep.sentiment);
    return rep;
}

}  // namespace bizcycle
