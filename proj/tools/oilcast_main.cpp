// oilcast: mixed-frequency homogenization, feature building, expert training,
// EP predictability testing and equity-curve backtesting, driven by a config
// file. See README.md for the config format and subcommands.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "oilcast/csv.hpp"
#include "oilcast/pipeline.hpp"
#include "oilcast/text.hpp"
#include "oilcast/version.hpp"

namespace fs = std::filesystem;
using namespace oilcast;

namespace {

MlpExpert load_expert_file(const std::string& out_dir) {
    return with_stage("evaluate", [&] {
        fs::path path = fs::path(out_dir) / "expert.txt";
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw Error(ErrorKind::io, "cannot open expert file '" + path.string() + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        return load_expert(buf.str());
    });
}

void emit(const std::string& out_dir, const char* name, std::string_view content) {
    write_file_atomic((fs::path(out_dir) / name).string(), content);
    std::cout << "wrote " << (fs::path(out_dir) / name).string() << "\n";
}

std::string dataset_csv(const PreparedData& data) {
    const ModelingDataset& ds = data.dataset;
    std::string out = "date";
    for (const FeatureColumn& col : ds.columns)
        out += "," + col.name;
    out += "," + ds.target.name + ",range\n";
    for (std::size_t r = 0; r < ds.rows(); ++r) {
        out += to_iso(ds.dates[r]);
        for (const FeatureColumn& col : ds.columns)
            out += "," + format_compact(*col.values[r]);
        out += "," + format_compact(*ds.target.values[r]);
        const char* range = r < ds.train.end ? "train"
                            : r < ds.test.end ? "test"
                                              : "new_data";
        out += std::string(",") + range + "\n";
    }
    return out;
}

std::string scores_csv(const TrainingOutcome& outcome) {
    std::string out = "seed,ep_degenerate,ep_prob,final_equity,selected\n";
    for (const ExpertScore& s : outcome.scores) {
        out += std::to_string(s.seed) + "," + (s.ep_degenerate ? "1" : "0") + "," +
               format_compact(s.ep_prob) + "," + format_compact(s.final_equity) + "," +
               (s.seed == outcome.selected_seed ? "1" : "0") + "\n";
    }
    return out;
}

std::string evaluation_text(const RangeEvaluation& eval) {
    std::string out = "range " + eval.name + " (" + to_iso(eval.dates.front()) + " .. " +
                      to_iso(eval.dates.back()) + ", " +
                      std::to_string(eval.dates.size()) + " weeks)\n";
    if (eval.ep_degenerate) {
        out += "  EP: degenerate (A_T " + format_compact(eval.degenerate_a) + ", B_T " +
               format_compact(eval.degenerate_b) + ")\n";
    } else {
        out += "  EP " + format_compact(eval.ep.ep) + "  prob " +
               format_compact(eval.ep.prob) + "  A_T " + format_compact(eval.ep.a_t) +
               "  B_T " + format_compact(eval.ep.b_t) + "  p_hat " +
               format_compact(eval.ep.p_hat) + "\n";
    }
    out += "  final equity " + format_compact(eval.curve.final_value()) +
           "  perfect " + format_compact(eval.perfect.final_value()) + "\n";
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"oilcast " + std::string(kVersion) +
                 " - oil price forecasting pipeline"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string out_override;
    std::uint64_t seed_override = 0;
    int experts_override = 0;
    bool has_seed = false, has_experts = false;

    app.add_option("--config", config_path, "pipeline config file")->required();
    app.add_option("--out", out_override, "output directory (overrides config)");
    app.add_option("--seed", seed_override, "base seed (overrides config)")
        ->each([&](const std::string&) { has_seed = true; });
    app.add_option("--experts", experts_override, "expert count (overrides config)")
        ->each([&](const std::string&) { has_experts = true; });

    CLI::App* cmd_interpolate =
        app.add_subcommand("interpolate", "homogenize every series to the weekly grid");
    CLI::App* cmd_features =
        app.add_subcommand("features", "build the input/output table and the split");
    CLI::App* cmd_train =
        app.add_subcommand("train", "train experts, select the best, save it");
    CLI::App* cmd_evaluate =
        app.add_subcommand("evaluate", "EP test of the saved expert on test and new data");
    CLI::App* cmd_backtest =
        app.add_subcommand("backtest", "equity curve of the saved expert on new data");
    CLI::App* cmd_run = app.add_subcommand("run", "full pipeline plus reports");
    CLI::App* cmd_report = app.add_subcommand("report", "re-emit reports for the saved expert");

    CLI11_PARSE(app, argc, argv);

    try {
        PipelineConfig config = load_config(config_path);
        if (!out_override.empty())
            config.out_dir = out_override;
        if (has_seed)
            config.base_seed = seed_override;
        if (has_experts)
            config.n_experts = experts_override;
        config.validate();

        if (cmd_interpolate->parsed()) {
            InterpolatedData data = interpolate_series(config);
            std::string fits = "id,frequency,degree,r_squared\n";
            for (std::size_t i = 0; i < data.weekly.size(); ++i) {
                emit(config.out_dir, (data.weekly[i].id + ".weekly.csv").c_str(),
                     series_to_csv(data.weekly[i]));
                fits += config.series[i].id + "," + to_string(config.series[i].frequency) +
                        "," + std::to_string(data.fits[i].degree) + "," +
                        format_compact(data.fits[i].r_squared) + "\n";
            }
            emit(config.out_dir, "interpolation.csv", fits);
        } else if (cmd_features->parsed()) {
            PreparedData data = prepare_data(config);
            emit(config.out_dir, "dataset.csv", dataset_csv(data));
        } else if (cmd_train->parsed()) {
            PreparedData data = prepare_data(config);
            TrainingOutcome outcome = train_and_select(config, data);
            emit(config.out_dir, "expert.txt", save_expert(outcome.expert));
            emit(config.out_dir, "scores.csv", scores_csv(outcome));
            std::cout << "selected seed " << outcome.selected_seed
                      << (outcome.ep_gate_passed ? "" : " (no expert passed the EP gate)")
                      << "\n";
        } else if (cmd_evaluate->parsed()) {
            PreparedData data = prepare_data(config);
            MlpExpert expert = load_expert_file(config.out_dir);
            RangeEvaluation test_eval = with_stage("evaluate", [&] {
                return evaluate_range(data, data.dataset.test, "test", expert, config);
            });
            RangeEvaluation new_eval = with_stage("evaluate", [&] {
                return evaluate_range(data, data.dataset.new_data, "new_data", expert,
                                      config);
            });
            std::string text = evaluation_text(test_eval) + evaluation_text(new_eval);
            emit(config.out_dir, "evaluation.txt", text);
            std::cout << text;
        } else if (cmd_backtest->parsed()) {
            PreparedData data = prepare_data(config);
            MlpExpert expert = load_expert_file(config.out_dir);
            RangeEvaluation new_eval = with_stage("evaluate", [&] {
                return evaluate_range(data, data.dataset.new_data, "new_data", expert,
                                      config);
            });
            emit(config.out_dir, "equity.csv", equity_csv_text(new_eval));
            emit(config.out_dir, "summary.txt", summary_text(new_eval));
            std::cout << summary_text(new_eval);
        } else if (cmd_report->parsed()) {
            PreparedData data = prepare_data(config);
            MlpExpert expert = load_expert_file(config.out_dir);
            RangeEvaluation new_eval = with_stage("evaluate", [&] {
                return evaluate_range(data, data.dataset.new_data, "new_data", expert,
                                      config);
            });
            emit(config.out_dir, "equity.csv", equity_csv_text(new_eval));
            emit(config.out_dir, "summary.txt", summary_text(new_eval));
            emit(config.out_dir, "report.svg", report_svg_text(new_eval));
        } else if (cmd_run->parsed()) {
            RunResult result = run_pipeline(config);
            for (const std::string& path : result.written_files)
                std::cout << "wrote " << path << "\n";
            std::cout << "selected seed " << result.training.selected_seed
                      << (result.training.ep_gate_passed
                              ? ""
                              : " (no expert passed the EP gate)")
                      << "\n";
            std::cout << summary_text(result.new_eval);
        }
        return 0;
    } catch (const StageError& e) {
        std::cerr << "stage=" << e.stage() << " error=" << to_string(e.kind()) << " "
                  << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "stage=cli error=" << to_string(e.kind()) << " " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "stage=cli error=io " << e.what() << "\n";
        return 1;
    }
}
