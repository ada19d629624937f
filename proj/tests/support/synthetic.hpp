#pragma once

// Deterministic synthetic dataset: a sine-plus-trend weekly oil price with
// correlated annual/quarterly macro inputs, in the shape the pipeline
// ingests. Used by the pipeline tests and to (re)generate data/synthetic.

#include <cmath>
#include <filesystem>
#include <string>

#include "oilcast/csv.hpp"
#include "oilcast/dates.hpp"
#include "oilcast/pipeline.hpp"
#include "oilcast/rng.hpp"
#include "oilcast/series.hpp"
#include "oilcast/text.hpp"

namespace oilcast::testsupport {

inline TimeSeries synthetic_price(int n_weeks, std::uint64_t noise_seed = 20051226) {
    TimeSeries s;
    s.id = "precio";
    s.frequency = Frequency::weekly;
    s.units = "$/b";
    SplitMix64 rng(noise_seed);
    Date start = make_date(1997, 1, 6);
    for (int t = 0; t < n_weeks; ++t) {
        double v = 21.0 + 0.02 * t + 4.0 * std::sin(2.0 * M_PI * t / 52.0) +
                   1.5 * std::sin(2.0 * M_PI * t / 19.0 + 1.3) + 0.3 * rng.gaussian();
        s.points.push_back(Observation{add_days(start, 7L * t), v});
    }
    return s;
}

inline TimeSeries synthetic_annual(const std::string& id, const std::string& units,
                                   double base, double growth, double curve,
                                   int n_years = 9) {
    TimeSeries s;
    s.id = id;
    s.frequency = Frequency::annual;
    s.units = units;
    for (int y = 0; y < n_years; ++y) {
        double v = base * std::pow(growth, y) + curve * y * y;
        s.points.push_back(Observation{make_date(1997 + y, 1, 1), v});
    }
    return s;
}

inline TimeSeries synthetic_quarterly(const std::string& id, const std::string& units,
                                      int n_quarters = 36) {
    TimeSeries s;
    s.id = id;
    s.frequency = Frequency::quarterly;
    s.units = units;
    for (int q = 0; q < n_quarters; ++q) {
        int year = 1997 + q / 4;
        unsigned month = 1 + 3 * (q % 4);
        // one slow swell over the sample, smooth enough for a low-degree fit
        double v = 2000.0 + 14.0 * q + 150.0 * std::sin(2.0 * M_PI * q / 40.0);
        s.points.push_back(Observation{make_date(year, month, 1), v});
    }
    return s;
}

// Writes the five CSVs plus config.ini into `dir` and returns the config path.
inline std::string write_synthetic_dataset(const std::filesystem::path& dir,
                                           int n_weeks = 468) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    auto put = [&](const std::string& name, const TimeSeries& series) {
        write_file_atomic((dir / name).string(), series_to_csv(series));
    };
    put("precio.csv", synthetic_price(n_weeks));
    put("gasto.csv", synthetic_annual("gasto", "millones Bs", 10.4e6, 1.035, 5.0e4));
    put("demanda.csv", synthetic_annual("demanda", "1000 b/d", 1980.0, 1.011, 0.8));
    put("inversion.csv", synthetic_annual("inversion", "millones Bs", 5.185e6, 1.042, 0.0));
    put("ingresos.csv", synthetic_quarterly("ingresos", "millones $"));

    std::string config;
    config += "# synthetic oil-price dataset\n";
    config += "[series precio]\n";
    config += "file = precio.csv\n";
    config += "frequency = weekly\n";
    config += "units = $/b\n";
    config += "sma = 2,5\n";
    config += "lags = 0\n\n";
    config += "[series gasto]\n";
    config += "file = gasto.csv\n";
    config += "frequency = annual\n";
    config += "units = millones Bs\n";
    config += "sma = 2,5\n";
    config += "lags = 0,15\n\n";
    config += "[series ingresos]\n";
    config += "file = ingresos.csv\n";
    config += "frequency = quarterly\n";
    config += "units = millones $\n";
    config += "sma = 2,5\n";
    config += "lags = 0,15\n\n";
    config += "[series demanda]\n";
    config += "file = demanda.csv\n";
    config += "frequency = annual\n";
    config += "units = 1000 b/d\n";
    config += "sma = 2,5\n";
    config += "lags = 0,15\n\n";
    config += "[series inversion]\n";
    config += "file = inversion.csv\n";
    config += "frequency = annual\n";
    config += "units = millones Bs\n";
    config += "sma = 2,5\n";
    config += "lags = 0,15\n\n";
    config += "[target]\n";
    config += "series = precio\n";
    config += "window = 4\n";
    config += "horizon = 5\n\n";
    config += "[train]\n";
    config += "learning_rate = 0.3\n";
    config += "error_margin = 0.05\n";
    config += "initial_weight_range = 0.4\n";
    config += "max_epochs = 400\n";
    config += "convergence_fraction = 1\n";
    config += "train_frac = 0.6\n";
    config += "test_frac = 0.3\n";
    config += "n_experts = 4\n";
    config += "base_seed = 7\n";
    config += "ep_threshold = 0.99\n";
    config += "perturb_rounds = 12\n";
    config += "perturb_epsilon = 0.1\n\n";
    config += "[backtest]\n";
    config += "cost_rate = 0.001\n";
    config += "initial_capital = 10\n";
    config += "weeks_per_year = 52\n";
    config += "out_dir = out\n";

    std::string config_path = (dir / "config.ini").string();
    write_file_atomic(config_path, config);
    return config_path;
}

} // namespace oilcast::testsupport
