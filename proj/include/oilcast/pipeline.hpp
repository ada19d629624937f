#pragma once

#include <string>
#include <vector>

#include "oilcast/backtest.hpp"
#include "oilcast/config.hpp"
#include "oilcast/errors.hpp"
#include "oilcast/features.hpp"
#include "oilcast/mlp.hpp"
#include "oilcast/predictability.hpp"
#include "oilcast/series.hpp"

namespace oilcast {

// An Error annotated with the pipeline stage it came from. The CLI renders it
// as the one-line "stage=<name> error=<kind>" form.
class StageError : public Error {
public:
    StageError(std::string stage, ErrorKind kind, const std::string& message)
        : Error(kind, message), stage_(std::move(stage)) {}

    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

// Run `fn`, attaching the stage name to any error that escapes. Errors that
// already carry a stage pass through untouched.
template <typename F>
decltype(auto) with_stage(const char* name, F&& fn) {
    try {
        return std::forward<F>(fn)();
    } catch (const StageError&) {
        throw;
    } catch (const Error& e) {
        throw StageError(name, e.kind(), e.what());
    } catch (const std::exception& e) {
        throw StageError(name, ErrorKind::io, e.what());
    }
}

// Result of ingest + homogenization onto the common weekly calendar.
struct InterpolatedData {
    std::vector<Date> calendar;
    std::vector<TimeSeries> weekly; // parallel to config order
    std::vector<FitReport> fits;
};

InterpolatedData interpolate_series(const PipelineConfig& config);

// Output of the data half of the pipeline: ingest -> interpolate ->
// features -> split.
struct PreparedData {
    std::vector<Date> calendar;
    std::vector<TimeSeries> weekly;  // homogenized series, parallel to config order
    std::vector<FitReport> fits;     // parallel to weekly
    ModelingDataset dataset;
    std::vector<double> row_price;   // observed weekly price aligned to dataset rows
};

PreparedData prepare_data(const PipelineConfig& config);

// Everything the evaluation of one range produces: the EP test of predicted
// vs observed target returns, and the costed equity backtest against the
// observed weekly price.
struct RangeEvaluation {
    std::string name;
    std::vector<Date> dates;
    std::vector<double> observed;  // realized target track
    std::vector<double> predicted; // network outputs
    bool ep_degenerate = false;
    EpResult ep;
    double degenerate_a = 0.0; // A_T/B_T carried when the test degenerates
    double degenerate_b = 0.0;
    EquityCurve curve;
    EquityCurve perfect;
    BacktestReport report;
};

RangeEvaluation evaluate_range(const PreparedData& data, RowRange range,
                               const std::string& name, const MlpExpert& expert,
                               const PipelineConfig& config);

struct TrainingOutcome {
    std::vector<ExpertScore> scores;
    bool ep_gate_passed = false;
    std::uint64_t selected_seed = 0;
    double equity_before_perturb = 0.0;
    double equity_after_perturb = 0.0;
    MlpExpert expert;
};

// generate -> EP gate + equity ranking on the test range -> optional
// random-perturbation improvement (seeded base_seed + n_experts).
TrainingOutcome train_and_select(const PipelineConfig& config, const PreparedData& data);

struct RunResult {
    PreparedData data;
    TrainingOutcome training;
    RangeEvaluation test_eval;
    RangeEvaluation new_eval;
    std::string manifest_json;
    std::vector<std::string> written_files;
};

// Full pipeline. Writes manifest.json, expert.txt, equity.csv, summary.txt
// and report.svg into config.out_dir; any stage failure removes files written
// so far. Deterministic for fixed config and inputs, manifest timestamp aside.
RunResult run_pipeline(const PipelineConfig& config);

// Report pieces, exposed for the CLI subcommands.
std::string equity_csv_text(const RangeEvaluation& eval);
std::string summary_text(const RangeEvaluation& eval);
std::string report_svg_text(const RangeEvaluation& eval);
std::string build_manifest_json(const PipelineConfig& config, const PreparedData& data,
                                const TrainingOutcome& training,
                                const RangeEvaluation& test_eval,
                                const RangeEvaluation& new_eval,
                                const std::string& expert_text,
                                const std::string& timestamp);

// Write-then-rename; creates parent directories.
void write_file_atomic(const std::string& path, std::string_view content);

} // namespace oilcast
