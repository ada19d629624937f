#include "oilcast/backtest.hpp"

#include <cmath>
#include <string>

#include "oilcast/errors.hpp"

namespace oilcast {

namespace {

void check_dates(std::span<const Date> dates, std::size_t periods) {
    if (!dates.empty() && dates.size() != periods + 1)
        throw Error(ErrorKind::input, "dates must have one entry per week plus the start");
}

std::string where(std::span<const Date> dates, std::size_t t) {
    if (!dates.empty())
        return to_iso(dates[t + 1]);
    return "week " + std::to_string(t + 1);
}

} // namespace

std::vector<int> signals(std::span<const double> forecast_returns) {
    std::vector<int> out;
    out.reserve(forecast_returns.size());
    for (double f : forecast_returns) {
        if (!std::isfinite(f))
            throw Error(ErrorKind::input, "non-finite forecast return");
        out.push_back(f > 0.0 ? 1 : (f < 0.0 ? -1 : 0));
    }
    return out;
}

EquityCurve equity_curve(std::span<const int> position_signals,
                         std::span<const double> realized_returns, double initial,
                         double cost_rate, std::span<const Date> dates) {
    if (position_signals.size() != realized_returns.size())
        throw Error(ErrorKind::input, "signals and returns lengths differ");
    if (!(initial > 0.0))
        throw Error(ErrorKind::input, "initial capital must be positive");
    if (!(cost_rate >= 0.0) || !(cost_rate < 1.0))
        throw Error(ErrorKind::input, "cost_rate must be in [0, 1)");
    check_dates(dates, position_signals.size());

    EquityCurve curve;
    curve.dates.assign(dates.begin(), dates.end());
    curve.equity.reserve(position_signals.size() + 1);
    curve.equity.push_back(initial);
    curve.positions.assign(position_signals.begin(), position_signals.end());
    curve.period_returns.reserve(position_signals.size());

    int previous = 0; // flat before the first week
    for (std::size_t t = 0; t < position_signals.size(); ++t) {
        int s = position_signals[t];
        double factor = 1.0 + s * realized_returns[t];
        if (s != previous)
            factor *= 1.0 - cost_rate;
        double next = curve.equity.back() * factor;
        if (!(next > 0.0))
            throw Error(ErrorKind::bankruptcy,
                        "equity depleted at " + where(dates, t));
        curve.period_returns.push_back(factor - 1.0);
        curve.equity.push_back(next);
        previous = s;
    }
    return curve;
}

EquityCurve perfect_equity(std::span<const double> realized_returns, double initial,
                           std::span<const Date> dates) {
    if (!(initial > 0.0))
        throw Error(ErrorKind::input, "initial capital must be positive");
    check_dates(dates, realized_returns.size());
    EquityCurve curve;
    curve.dates.assign(dates.begin(), dates.end());
    curve.equity.reserve(realized_returns.size() + 1);
    curve.equity.push_back(initial);
    curve.positions.reserve(realized_returns.size());
    curve.period_returns.reserve(realized_returns.size());
    for (double r : realized_returns) {
        curve.positions.push_back(r > 0.0 ? 1 : (r < 0.0 ? -1 : 0));
        curve.period_returns.push_back(std::abs(r));
        curve.equity.push_back(curve.equity.back() * (1.0 + std::abs(r)));
    }
    return curve;
}

BacktestReport metrics(const EquityCurve& curve, const EquityCurve& perfect,
                       double weeks_per_year) {
    const std::size_t t_count = curve.periods();
    if (t_count == 0)
        throw Error(ErrorKind::input, "empty equity curve");
    if (perfect.periods() != t_count)
        throw Error(ErrorKind::input, "curve and perfect benchmark are not aligned");
    if (!(weeks_per_year > 0.0))
        throw Error(ErrorKind::input, "weeks_per_year must be positive");

    BacktestReport report;
    report.observations = static_cast<int>(t_count);
    report.initial_capital = curve.initial();
    report.final_capital = curve.final_value();
    report.perfect_equity_final = perfect.final_value();

    // A hit is a week where the position and the realized move agree. The
    // realized move is recovered from the period return net of any cost, so
    // it is derived from positions and the curve itself.
    double negative_sum = 0.0;
    int negative_count = 0;
    double worst_step = 0.0;       // footnote definition: single-period decline
    double worst_from_peak = 0.0;  // conventional peak-to-trough
    double peak = curve.equity.front();
    for (std::size_t t = 0; t < t_count; ++t) {
        double prev = curve.equity[t];
        double next = curve.equity[t + 1];
        double step_decline = (prev - next) / prev;
        worst_step = std::max(worst_step, step_decline);
        peak = std::max(peak, prev);
        worst_from_peak = std::max(worst_from_peak, (peak - next) / peak);
        if (curve.period_returns[t] < 0.0) {
            negative_sum += curve.period_returns[t];
            ++negative_count;
        }
    }
    for (std::size_t t = 0; t < t_count; ++t) {
        int s = curve.positions[t];
        if (s == 0)
            continue; // flat weeks are observations but neither hit nor miss
        // perfect.period_returns holds |r_t| and perfect.positions sign(r_t)
        double r = perfect.period_returns[t] * perfect.positions[t];
        if (s * r > 0.0)
            ++report.hits;
        else if (s * r < 0.0)
            ++report.misses;
    }
    int decided = report.hits + report.misses;
    report.hit_rate = decided > 0 ? static_cast<double>(report.hits) / decided : 0.0;
    report.annualized_return =
        std::pow(report.final_capital / report.initial_capital,
                 weeks_per_year / static_cast<double>(t_count)) -
        1.0;
    report.mean_negative_volatility =
        negative_count > 0 ? negative_sum / negative_count : 0.0;
    report.max_drawdown = worst_step;
    report.peak_to_trough_drawdown = worst_from_peak;
    report.equity_over_perfect = report.final_capital / report.perfect_equity_final;
    return report;
}

} // namespace oilcast
