#include "oilcast/features.hpp"

#include <cmath>

#include "oilcast/errors.hpp"

namespace oilcast {

std::vector<std::vector<double>> ModelingDataset::input_rows(RowRange range) const {
    std::vector<std::vector<double>> rows;
    rows.reserve(range.size());
    for (std::size_t r = range.begin; r < range.end; ++r) {
        std::vector<double> row;
        row.reserve(columns.size());
        for (const FeatureColumn& col : columns)
            row.push_back(*col.values[r]);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<double> ModelingDataset::target_values(RowRange range) const {
    std::vector<double> out;
    out.reserve(range.size());
    for (std::size_t r = range.begin; r < range.end; ++r)
        out.push_back(*target.values[r]);
    return out;
}

std::vector<std::string> ModelingDataset::column_names() const {
    std::vector<std::string> names;
    names.reserve(columns.size());
    for (const FeatureColumn& col : columns)
        names.push_back(col.name);
    return names;
}

std::vector<std::optional<double>> sma(std::span<const double> series, int window) {
    if (window < 1)
        throw Error(ErrorKind::input, "sma window must be >= 1");
    // window >= length yields an all-absent column, by contract not an error
    std::vector<std::optional<double>> out(series.size());
    for (std::size_t t = static_cast<std::size_t>(window); t < series.size(); ++t) {
        double sum = 0.0;
        for (std::size_t i = t - window; i < t; ++i)
            sum += series[i];
        out[t] = sum / window;
    }
    return out;
}

std::vector<std::optional<double>> lag(std::span<const std::optional<double>> series,
                                       int k) {
    if (k < 0)
        throw Error(ErrorKind::input, "lag must be >= 0");
    std::vector<std::optional<double>> out(series.size());
    for (std::size_t t = static_cast<std::size_t>(k); t < series.size(); ++t)
        out[t] = series[t - k];
    return out;
}

std::vector<std::optional<double>> make_target(std::span<const double> price,
                                               int window, int horizon) {
    if (window < 1)
        throw Error(ErrorKind::input, "target window must be >= 1");
    if (horizon < 1)
        throw Error(ErrorKind::input, "target horizon must be >= 1");
    const long n = static_cast<long>(price.size());
    std::vector<std::optional<double>> out(price.size());
    for (long t = 0; t < n; ++t) {
        long first = t + horizon - window + 1;
        long last = t + horizon;
        if (first < 0 || last >= n)
            continue;
        double sum = 0.0;
        for (long i = first; i <= last; ++i)
            sum += price[i];
        out[t] = sum / window;
    }
    return out;
}

FeatureTable assemble(std::vector<Date> dates, std::vector<FeatureColumn> columns,
                      FeatureColumn target) {
    const std::size_t n = dates.size();
    if (columns.empty())
        throw Error(ErrorKind::assembly, "no input columns");
    for (const FeatureColumn& col : columns)
        if (col.values.size() != n)
            throw Error(ErrorKind::input, "column '" + col.name +
                                              "' length does not match the calendar");
    if (target.values.size() != n)
        throw Error(ErrorKind::input, "target length does not match the calendar");

    auto first_present = [n](const FeatureColumn& col) {
        std::size_t i = 0;
        while (i < n && !col.values[i].has_value())
            ++i;
        return i;
    };
    auto last_present = [n](const FeatureColumn& col) -> long {
        long i = static_cast<long>(n) - 1;
        while (i >= 0 && !col.values[static_cast<std::size_t>(i)].has_value())
            --i;
        return i;
    };

    std::size_t first = first_present(target);
    long last = last_present(target);
    for (const FeatureColumn& col : columns) {
        first = std::max(first, first_present(col));
        last = std::min(last, last_present(col));
    }
    if (last < 0 || static_cast<long>(first) > last)
        throw Error(ErrorKind::assembly, "no row has all inputs and target present");

    auto slice = [&](const FeatureColumn& col) {
        FeatureColumn out;
        out.name = col.name;
        out.values.assign(col.values.begin() + static_cast<long>(first),
                          col.values.begin() + last + 1);
        for (std::size_t i = 0; i < out.values.size(); ++i)
            if (!out.values[i].has_value())
                throw Error(ErrorKind::assembly, "column '" + col.name +
                                                     "' has an interior gap at row " +
                                                     std::to_string(first + i));
        return out;
    };

    FeatureTable table;
    table.dates.assign(dates.begin() + static_cast<long>(first), dates.begin() + last + 1);
    table.columns.reserve(columns.size());
    for (const FeatureColumn& col : columns)
        table.columns.push_back(slice(col));
    table.target = slice(target);
    return table;
}

ModelingDataset split(FeatureTable table, double train_frac, double test_frac) {
    if (!(train_frac > 0.0) || !(test_frac > 0.0) || !(train_frac + test_frac < 1.0))
        throw Error(ErrorKind::split, "fractions must satisfy 0 < train, 0 < test, train + test < 1");
    const std::size_t n = table.rows();
    const std::size_t n_train = static_cast<std::size_t>(std::floor(n * train_frac));
    const std::size_t n_test = static_cast<std::size_t>(std::floor(n * test_frac));
    const std::size_t n_new = n - n_train - n_test;
    if (n_train == 0 || n_test == 0 || n_new == 0)
        throw Error(ErrorKind::split, "split of " + std::to_string(n) +
                                          " rows leaves an empty range (" +
                                          std::to_string(n_train) + "/" +
                                          std::to_string(n_test) + "/" +
                                          std::to_string(n_new) + ")");
    ModelingDataset ds;
    ds.dates = std::move(table.dates);
    ds.columns = std::move(table.columns);
    ds.target = std::move(table.target);
    ds.train = RowRange{0, n_train};
    ds.test = RowRange{n_train, n_train + n_test};
    ds.new_data = RowRange{n_train + n_test, n};
    return ds;
}

} // namespace oilcast
