#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace oilcast {

// Sigmoid units on hidden and output layers; raw features and target are
// mapped affinely into [0.1, 0.9] so the output unit can reach every target.
inline constexpr double kScaleLow = 0.1;
inline constexpr double kScaleHigh = 0.9;
inline constexpr double kScaleSpan = kScaleHigh - kScaleLow;

struct TrainConfig {
    double learning_rate = 0.3;
    double error_margin = 0.05;        // per-row tolerance vs the scaled output span
    double initial_weight_range = 0.4; // weights drawn from [-range, +range]
    int max_epochs = 1000;
    double convergence_fraction = 1.0; // stop once this fraction of rows is in tolerance

    void validate() const;
    bool operator==(const TrainConfig&) const = default;
};

struct ScaleParam {
    std::string name;
    double min = 0.0;
    double max = 0.0;
};

struct EpochStat {
    int epoch = 0;
    double fraction_within_tolerance = 0.0;
};

// Dense training/evaluation rows handed to the network.
struct SampleSet {
    std::vector<std::string> feature_names;
    std::string target_name;
    std::vector<std::vector<double>> inputs; // row-major, one row per sample
    std::vector<double> targets;

    std::size_t size() const { return inputs.size(); }
    void validate() const;
};

// One trained feedforward network (an "expert"): a single hidden layer, one
// output, its raw<->scaled maps and the seed that reproduces it.
struct MlpExpert {
    int n_inputs = 0;
    int n_hidden = 0;
    std::vector<double> w1; // n_hidden x n_inputs, row-major
    std::vector<double> b1; // n_hidden
    std::vector<double> w2; // n_hidden (single output row)
    double b2 = 0.0;
    std::vector<ScaleParam> input_scaling; // one per feature once fitted
    ScaleParam output_scaling;
    bool scaled = false;
    std::uint64_t seed = 0;
    std::vector<EpochStat> training_history;

    std::size_t parameter_count() const {
        return w1.size() + b1.size() + w2.size() + 1;
    }
};

// Gradients of the per-row loss 0.5 * (output - target)^2 in scaled space,
// laid out like the expert's parameters.
struct Gradients {
    std::vector<double> w1;
    std::vector<double> b1;
    std::vector<double> w2;
    double b2 = 0.0;
};

// Weights and biases drawn uniformly from [-range, +range] with the project
// generator, in the fixed order W1 (row-major), b1, W2, b2.
MlpExpert init_expert(int n_inputs, int n_hidden, double range, std::uint64_t seed);

// Per-feature and target (min, max) from the train rows only. Values outside
// the train range map outside [0.1, 0.9] at inference; no clipping. A
// constant column is a scaling error naming the feature.
void fit_scaling(MlpExpert& expert, const SampleSet& train);

double scale_value(const ScaleParam& p, double raw);
double descale_value(const ScaleParam& p, double scaled);

// Raw-in, raw-out prediction.
double forward(const MlpExpert& expert, std::span<const double> x);

// Analytic backprop for one scaled row; exposed so tests can hold it against
// finite differences.
Gradients backprop_gradients(const MlpExpert& expert, std::span<const double> x_scaled,
                             double target_scaled);

// Online (per-row) gradient descent in fixed chronological order. After each
// epoch records the fraction of train rows whose scaled absolute error is
// within error_margin * 0.8 and stops once it reaches convergence_fraction
// or max_epochs. Non-finite or exploding weights abort with the epoch.
void train(MlpExpert& expert, const SampleSet& train, const TrainConfig& cfg);

// n experts seeded base_seed..base_seed+n-1, each scaled and trained on the
// train rows; independent experts may train on a small worker pool.
// n_hidden = 0 picks one hidden unit per input.
std::vector<MlpExpert> generate_experts(int n, std::uint64_t base_seed,
                                        const SampleSet& train, const TrainConfig& cfg,
                                        int n_hidden = 0);

// What the selection stages see for one expert: the EP confidence on the test
// range and the final equity of the induced strategy.
struct ExpertScore {
    std::uint64_t seed = 0;
    double ep_prob = 0.0;
    bool ep_degenerate = false;
    double final_equity = 0.0;

    bool ep_passed(double threshold) const {
        return !ep_degenerate && ep_prob >= threshold;
    }
};

using ExpertScorer = std::function<ExpertScore(const MlpExpert&)>;

struct SelectionResult {
    std::size_t best_index = 0;
    bool any_passed_ep = false; // false: nothing cleared the EP gate, best by equity anyway
    std::vector<ExpertScore> scores;
};

// Stage 1 keeps experts whose EP probability meets ep_threshold (the EP test
// is a necessary, not sufficient, condition); stage 2 ranks the survivors by
// final equity. Ties break toward the lowest seed, so the result is invariant
// under permutation of the expert list.
SelectionResult select_expert(const std::vector<MlpExpert>& experts, double ep_threshold,
                              const ExpertScorer& scorer);

// Random-perturbation hill climb: each round adds uniform noise in
// [-epsilon, +epsilon] to every weight and bias and keeps the candidate iff
// its equity score strictly improves. Deterministic under seed.
MlpExpert perturb_improve(const MlpExpert& expert, double epsilon, int rounds,
                          std::uint64_t seed,
                          const std::function<double(const MlpExpert&)>& equity_score);

// Line-oriented text format, versioned "OILCAST-MLP v1", 17-significant-digit
// decimals and a trailing FNV-1a checksum line. load(save(e)) reproduces
// topology, weights, scaling and seed bit-for-bit.
std::string save_expert(const MlpExpert& expert);
MlpExpert load_expert(std::string_view text);

} // namespace oilcast
