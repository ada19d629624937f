#include "oilcast/predictability.hpp"

#include <cmath>
#include <string>

#include "oilcast/errors.hpp"

namespace oilcast {

namespace {

double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

template <typename Ratio>
std::vector<double> returns_impl(std::span<const double> numerator,
                                 std::span<const double> denominator, Ratio ratio) {
    if (numerator.size() != denominator.size())
        throw Error(ErrorKind::input, "price tracks differ in length");
    if (numerator.size() < 2)
        throw Error(ErrorKind::input, "need at least 2 prices for returns");
    std::vector<double> out;
    out.reserve(numerator.size() - 1);
    for (std::size_t t = 1; t < numerator.size(); ++t) {
        if (!(numerator[t] > 0.0) || !(denominator[t - 1] > 0.0))
            throw Error(ErrorKind::domain, "non-positive price at index " + std::to_string(t));
        out.push_back(ratio(numerator[t], denominator[t - 1]));
    }
    return out;
}

double log_ratio(double a, double b) { return std::log(a / b); }
double simple_ratio(double a, double b) { return a / b - 1.0; }

} // namespace

const char* to_string(ReturnKind kind) {
    return kind == ReturnKind::logarithmic ? "log" : "simple";
}

std::vector<double> log_returns(std::span<const double> prices) {
    return returns_impl(prices, prices, log_ratio);
}

std::vector<double> simple_returns(std::span<const double> prices) {
    return returns_impl(prices, prices, simple_ratio);
}

std::vector<double> forecast_returns(std::span<const double> forecast_prices,
                                     std::span<const double> realized_prices) {
    return returns_impl(forecast_prices, realized_prices, log_ratio);
}

std::vector<double> forecast_simple_returns(std::span<const double> forecast_prices,
                                            std::span<const double> realized_prices) {
    return returns_impl(forecast_prices, realized_prices, simple_ratio);
}

std::vector<double> realized_returns(std::span<const double> prices, ReturnKind kind) {
    return kind == ReturnKind::logarithmic ? log_returns(prices) : simple_returns(prices);
}

std::vector<double> forecast_returns_of(std::span<const double> forecast_prices,
                                        std::span<const double> realized_prices,
                                        ReturnKind kind) {
    return kind == ReturnKind::logarithmic
               ? forecast_returns(forecast_prices, realized_prices)
               : forecast_simple_returns(forecast_prices, realized_prices);
}

EpResult ep_test(const ReturnPair& pair) {
    const std::size_t t_count = pair.y.size();
    if (pair.y_hat.size() != t_count)
        throw Error(ErrorKind::input, "y and y_hat lengths differ");
    if (t_count < 2)
        throw Error(ErrorKind::input, "EP test needs T >= 2");
    for (std::size_t i = 0; i < t_count; ++i)
        if (!std::isfinite(pair.y[i]) || !std::isfinite(pair.y_hat[i]))
            throw Error(ErrorKind::input, "non-finite return at index " + std::to_string(i));

    const double T = static_cast<double>(t_count);
    double sum_signed = 0.0, sum_sign = 0.0, sum_y = 0.0;
    for (std::size_t i = 0; i < t_count; ++i) {
        double s = sign_of(pair.y_hat[i]);
        sum_signed += s * pair.y[i];
        sum_sign += s;
        sum_y += pair.y[i];
    }
    const double mean_y = sum_y / T;
    double ss_y = 0.0;
    for (std::size_t i = 0; i < t_count; ++i)
        ss_y += (pair.y[i] - mean_y) * (pair.y[i] - mean_y);

    EpResult r;
    r.a_t = sum_signed / T;
    r.b_t = (sum_sign / T) * mean_y;
    r.p_hat = 0.5 * (1.0 + sum_sign / T);
    r.variance = (4.0 / (T * T)) * r.p_hat * (1.0 - r.p_hat) * ss_y;
    if (!(r.variance > 0.0))
        throw DegenerateTestError(r.a_t, r.b_t,
                                  "EP variance estimate is zero (one-sided forecasts or "
                                  "constant returns)");
    r.ep = (r.a_t - r.b_t) / std::sqrt(r.variance);
    r.prob = ep_probability(r.ep);
    return r;
}

double ep_probability(double ep) {
    return 1.0 - 2.0 * (1.0 - normal_cdf(std::abs(ep)));
}

double normal_cdf(double z) {
    // Abramowitz & Stegun 26.2.17, |error| < 7.5e-8. Complementarity
    // Phi(-z) = 1 - Phi(z) holds exactly by the reflection below.
    if (z == 0.0)
        return 0.5;
    double zz = std::abs(z);
    double pdf = std::exp(-0.5 * zz * zz) / std::sqrt(2.0 * 3.141592653589793238462643);
    double t = 1.0 / (1.0 + 0.2316419 * zz);
    double poly = ((((1.330274429 * t - 1.821255978) * t + 1.781477937) * t -
                    0.356563782) * t + 0.319381530) * t;
    return z > 0.0 ? 1.0 - pdf * poly : pdf * poly;
}

} // namespace oilcast
