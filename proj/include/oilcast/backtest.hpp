#pragma once

#include <span>
#include <vector>

#include "oilcast/dates.hpp"

namespace oilcast {

// Account value over time from compounding weekly positions. equity has one
// more entry than period_returns/positions (the initial capital), and dates,
// when supplied, align with equity.
struct EquityCurve {
    std::vector<Date> dates;
    std::vector<double> equity;
    std::vector<int> positions;          // -1 short, 0 flat, +1 long
    std::vector<double> period_returns;  // combined per-week factor - 1, after costs

    double initial() const { return equity.front(); }
    double final_value() const { return equity.back(); }
    std::size_t periods() const { return period_returns.size(); }
};

// The strategy summary table. max_drawdown is the largest single-period
// decline; peak_to_trough_drawdown is the conventional running-peak measure,
// reported alongside it.
struct BacktestReport {
    int observations = 0;
    int hits = 0;
    int misses = 0;
    double hit_rate = 0.0;
    double initial_capital = 0.0;
    double final_capital = 0.0;
    double annualized_return = 0.0;
    double mean_negative_volatility = 0.0;
    double perfect_equity_final = 0.0;
    double equity_over_perfect = 0.0;
    double max_drawdown = 0.0;
    double peak_to_trough_drawdown = 0.0;
};

// s_t = sign(forecast return); zero stays flat.
std::vector<int> signals(std::span<const double> forecast_returns);

// E_0 = initial; E_t = E_{t-1} * (1 + s_t * r_t) * (1 - cost_rate * changed_t)
// where changed_t = 1 iff the position differs from the previous week (the
// week before the first is flat). Realized returns are simple returns.
// Equity at or below zero raises ErrorKind::bankruptcy. `dates`, when given,
// must have signals.size() + 1 entries.
EquityCurve equity_curve(std::span<const int> position_signals,
                         std::span<const double> realized_returns, double initial,
                         double cost_rate, std::span<const Date> dates = {});

// Clairvoyant benchmark: every week earns |r_t|, no costs.
EquityCurve perfect_equity(std::span<const double> realized_returns, double initial,
                           std::span<const Date> dates = {});

// Summary metrics over an equity curve and its perfect benchmark. Flat weeks
// count as observations but neither hits nor misses. annualized_return
// compounds final/initial over weeks_per_year/T.
BacktestReport metrics(const EquityCurve& curve, const EquityCurve& perfect,
                       double weeks_per_year = 52.0);

} // namespace oilcast
