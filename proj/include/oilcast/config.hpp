#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oilcast/mlp.hpp"
#include "oilcast/predictability.hpp"
#include "oilcast/series.hpp"

namespace oilcast {

// One [series <id>] block: where the raw data lives and which transform
// columns to build from it.
struct SeriesConfig {
    std::string id;
    std::string path;
    Frequency frequency = Frequency::weekly;
    std::string units;
    std::vector<int> sma_windows{2, 5}; // short and long trailing averages
    std::vector<int> lags{0, 15};       // raw-value lags, 0 = the series itself
    int max_degree = 6;
    double r2_threshold = 0.99;

    bool operator==(const SeriesConfig&) const = default;
};

struct PipelineConfig {
    std::vector<SeriesConfig> series;

    // [target]
    std::string target_series;
    int target_window = 4;
    int target_horizon = 5;
    ReturnKind return_kind = ReturnKind::logarithmic; // EP-test return convention

    // [train]
    TrainConfig train;
    double train_frac = 0.60;
    double test_frac = 0.30;
    int n_experts = 10;
    std::uint64_t base_seed = 1;
    int n_hidden = 0; // 0 = one hidden unit per input
    double ep_threshold = 0.99;
    int perturb_rounds = 0; // 0 disables the random-perturbation improvement
    double perturb_epsilon = 0.05;

    // [backtest]
    double cost_rate = 0.001;
    double initial_capital = 10.0;
    double weeks_per_year = 52.0;
    std::string out_dir = "out";

    bool operator==(const PipelineConfig&) const = default;
    void validate() const;
    const SeriesConfig& target_config() const;
};

// Line-oriented "key = value" file with [section] headers; sections are
// [series <id>], [target], [train] and [backtest]. '#' starts a comment.
// Unknown keys are errors; omitted optional keys take their defaults.
// Relative file paths resolve against `base_dir`; when check_files is set
// every referenced file must exist.
PipelineConfig parse_config_text(std::string_view text, const std::string& base_dir,
                                 bool check_files = true);

PipelineConfig load_config(const std::string& path);

// Canonical text that parses back to an equal config.
std::string dump_config(const PipelineConfig& config);

} // namespace oilcast
