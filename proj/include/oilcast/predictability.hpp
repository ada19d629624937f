#pragma once

#include <span>
#include <vector>

namespace oilcast {

// Realized returns y_t paired with forecast returns y_hat_t, equal length T.
struct ReturnPair {
    std::vector<double> y;
    std::vector<double> y_hat;
};

// Anatolyev-Gerko Excess Profitability test outputs.
//   A_T  = (1/T) sum sign(y_hat_t) * y_t        (mean trading-rule return)
//   B_T  = ((1/T) sum sign(y_hat_t)) * ((1/T) sum y_t)
//   p_hat = (1 + (1/T) sum sign(y_hat_t)) / 2
//   V_EP = (4/T^2) * p_hat * (1 - p_hat) * sum (y_t - mean(y))^2
//   EP   = (A_T - B_T) / sqrt(V_EP), asymptotically N(0,1) under the null
//   prob = 1 - 2 * (1 - Phi(|EP|))              (two-sided confidence level)
struct EpResult {
    double a_t = 0.0;
    double b_t = 0.0;
    double p_hat = 0.0;
    double variance = 0.0;
    double ep = 0.0;
    double prob = 0.0;
};

// Logarithmic returns are the default convention; simple returns stay
// available behind a switch.
enum class ReturnKind { logarithmic, simple };

const char* to_string(ReturnKind kind);

// r_t = ln(p_t / p_{t-1}); length = input length - 1. Non-positive prices are
// a domain error.
std::vector<double> log_returns(std::span<const double> prices);

// r_t = p_t / p_{t-1} - 1, same alignment and domain rules as log_returns.
std::vector<double> simple_returns(std::span<const double> prices);

// Forecast return against the last realized price: out_t = ln(f_t / p_{t-1}),
// so sign(out_t) is a tradable next-period call. Inputs are equal-length
// price tracks; output length = length - 1.
std::vector<double> forecast_returns(std::span<const double> forecast_prices,
                                     std::span<const double> realized_prices);

std::vector<double> forecast_simple_returns(std::span<const double> forecast_prices,
                                            std::span<const double> realized_prices);

// Kind-dispatching forms used by the pipeline.
std::vector<double> realized_returns(std::span<const double> prices, ReturnKind kind);
std::vector<double> forecast_returns_of(std::span<const double> forecast_prices,
                                        std::span<const double> realized_prices,
                                        ReturnKind kind);

// sign(0) = 0: a zero forecast contributes nothing but keeps T fixed. Throws
// DegenerateTestError when V_EP is zero (all forecasts one-sided, or the
// realized returns have no variance).
EpResult ep_test(const ReturnPair& pair);

// Two-sided confidence level for a given EP statistic.
double ep_probability(double ep);

// Standard normal CDF via the Abramowitz-Stegun 26.2.17 rational
// approximation; absolute error below 7.5e-8.
double normal_cdf(double z);

} // namespace oilcast
