#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "oilcast/dates.hpp"

namespace oilcast {

// One column of the modeling table, aligned to the weekly calendar. Leading
// entries may be absent (transform warm-up) and the target may end absent
// (forward horizon); interior gaps are invalid.
struct FeatureColumn {
    std::string name; // source id + transform tag, e.g. "gasto.sma5"
    std::vector<std::optional<double>> values;
};

// Half-open row interval.
struct RowRange {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::size_t size() const { return end - begin; }
};

// Rectangular, gap-free table produced by assemble().
struct FeatureTable {
    std::vector<Date> dates;
    std::vector<FeatureColumn> columns;
    FeatureColumn target;

    std::size_t rows() const { return dates.size(); }
};

// The assembled table partitioned chronologically into train < test < new.
struct ModelingDataset {
    std::vector<Date> dates;
    std::vector<FeatureColumn> columns;
    FeatureColumn target;
    RowRange train;
    RowRange test;
    RowRange new_data;

    std::size_t rows() const { return dates.size(); }
    // Dense views over a range; every retained row is complete by construction.
    std::vector<std::vector<double>> input_rows(RowRange range) const;
    std::vector<double> target_values(RowRange range) const;
    std::vector<std::string> column_names() const;
};

// Trailing simple moving average of the last `window` already-occurred
// values, excluding the current one: out[t] = mean(x[t-window..t-1]).
// Absent for t < window; a window not shorter than the series yields an
// all-absent column.
std::vector<std::optional<double>> sma(std::span<const double> series, int window);

// out[t] = in[t-k], absent for t < k.
std::vector<std::optional<double>> lag(std::span<const std::optional<double>> series,
                                       int k);

// Forward target: the SMA(window) of price evaluated `horizon` weeks ahead,
// i.e. the mean of price[t+horizon-window+1 .. t+horizon]. Absent wherever
// the forward window sticks out of the series.
std::vector<std::optional<double>> make_target(std::span<const double> price,
                                               int window = 4, int horizon = 5);

// Drop leading rows with any absent input or target and trailing rows with an
// absent target; verify the surviving block is complete.
FeatureTable assemble(std::vector<Date> dates, std::vector<FeatureColumn> columns,
                      FeatureColumn target);

// Chronological 60/30/10-style split: floor(N*train_frac) rows, then
// floor(N*test_frac) rows, then the remainder. No shuffling.
ModelingDataset split(FeatureTable table, double train_frac = 0.60,
                      double test_frac = 0.30);

} // namespace oilcast
