#include "oilcast/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "oilcast/csv.hpp"
#include "oilcast/svg.hpp"
#include "oilcast/text.hpp"
#include "oilcast/version.hpp"

namespace oilcast {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string pct(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f%%", v * 100.0);
    return buf;
}

std::string money(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

json ep_to_json(const RangeEvaluation& eval) {
    json j;
    j["degenerate"] = eval.ep_degenerate;
    if (eval.ep_degenerate) {
        j["a_t"] = eval.degenerate_a;
        j["b_t"] = eval.degenerate_b;
    } else {
        j["a_t"] = eval.ep.a_t;
        j["b_t"] = eval.ep.b_t;
        j["p_hat"] = eval.ep.p_hat;
        j["variance"] = eval.ep.variance;
        j["ep"] = eval.ep.ep;
        j["prob"] = eval.ep.prob;
    }
    return j;
}

json report_to_json(const BacktestReport& r) {
    json j;
    j["observations"] = r.observations;
    j["hits"] = r.hits;
    j["misses"] = r.misses;
    j["hit_rate"] = r.hit_rate;
    j["initial_capital"] = r.initial_capital;
    j["final_capital"] = r.final_capital;
    j["annualized_return"] = r.annualized_return;
    j["mean_negative_volatility"] = r.mean_negative_volatility;
    j["perfect_equity_final"] = r.perfect_equity_final;
    j["equity_over_perfect"] = r.equity_over_perfect;
    j["max_drawdown"] = r.max_drawdown;
    j["peak_to_trough_drawdown"] = r.peak_to_trough_drawdown;
    return j;
}

std::string utc_timestamp() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace

InterpolatedData interpolate_series(const PipelineConfig& config) {
    with_stage("config", [&] { config.validate(); });

    std::vector<TimeSeries> raw = with_stage("ingest", [&] {
        std::vector<TimeSeries> out;
        out.reserve(config.series.size());
        for (const SeriesConfig& s : config.series)
            out.push_back(ingest_csv(s.path, s.frequency, s.id, s.units));
        return out;
    });

    InterpolatedData data;
    with_stage("interpolate", [&] {
        // Calendar: intersection of every series' covered range, phase-locked
        // to the target series' own weekly dates when it is weekly.
        Date start = coverage_start(raw.front());
        Date end = coverage_end(raw.front());
        for (const TimeSeries& s : raw) {
            if (day_number(coverage_start(s)) > day_number(start))
                start = coverage_start(s);
            if (day_number(coverage_end(s)) < day_number(end))
                end = coverage_end(s);
        }
        const TimeSeries* target_raw = nullptr;
        for (std::size_t i = 0; i < raw.size(); ++i)
            if (config.series[i].id == config.target_series)
                target_raw = &raw[i];
        if (target_raw && target_raw->frequency == Frequency::weekly) {
            for (const Observation& p : target_raw->points)
                if (day_number(p.date) >= day_number(start)) {
                    start = p.date;
                    break;
                }
        }
        if (day_number(start) > day_number(end))
            throw Error(ErrorKind::config, "series date ranges do not overlap");
        data.calendar = weekly_calendar(start, end);

        for (std::size_t i = 0; i < raw.size(); ++i) {
            InterpolationResult r =
                interpolate_to_weekly(raw[i], data.calendar, config.series[i].max_degree,
                                      config.series[i].r2_threshold);
            data.weekly.push_back(std::move(r.weekly));
            data.fits.push_back(std::move(r.fit));
        }
    });
    return data;
}

PreparedData prepare_data(const PipelineConfig& config) {
    InterpolatedData interpolated = interpolate_series(config);
    PreparedData data;
    data.calendar = std::move(interpolated.calendar);
    data.weekly = std::move(interpolated.weekly);
    data.fits = std::move(interpolated.fits);

    FeatureTable table = with_stage("features", [&] {
        std::vector<FeatureColumn> columns;
        const std::vector<double>* price_values = nullptr;
        std::vector<std::vector<double>> value_store(data.weekly.size());
        for (std::size_t i = 0; i < data.weekly.size(); ++i) {
            value_store[i].reserve(data.weekly[i].points.size());
            for (const Observation& p : data.weekly[i].points)
                value_store[i].push_back(p.value);
            if (config.series[i].id == config.target_series)
                price_values = &value_store[i];
        }
        for (std::size_t i = 0; i < data.weekly.size(); ++i) {
            const SeriesConfig& sc = config.series[i];
            const std::vector<double>& values = value_store[i];
            std::vector<std::optional<double>> as_optional(values.begin(), values.end());
            for (int k : sc.lags) {
                FeatureColumn col;
                col.name = k == 0 ? sc.id : sc.id + ".lag" + std::to_string(k);
                col.values = lag(as_optional, k);
                columns.push_back(std::move(col));
            }
            for (int w : sc.sma_windows) {
                FeatureColumn col;
                col.name = sc.id + ".sma" + std::to_string(w);
                col.values = sma(values, w);
                columns.push_back(std::move(col));
            }
        }
        FeatureColumn target;
        target.name = config.target_series + ".target";
        target.values = make_target(*price_values, config.target_window,
                                    config.target_horizon);
        return assemble(data.calendar, std::move(columns), std::move(target));
    });

    with_stage("split", [&] {
        data.dataset = split(std::move(table), config.train_frac, config.test_frac);
    });

    // Observed weekly price aligned with the retained rows, for the backtest.
    const TimeSeries* weekly_price = nullptr;
    for (std::size_t i = 0; i < data.weekly.size(); ++i)
        if (config.series[i].id == config.target_series)
            weekly_price = &data.weekly[i];
    long offset = days_between(data.calendar.front(), data.dataset.dates.front()) / 7;
    data.row_price.reserve(data.dataset.rows());
    for (std::size_t r = 0; r < data.dataset.rows(); ++r)
        data.row_price.push_back(
            weekly_price->points[static_cast<std::size_t>(offset) + r].value);
    return data;
}

RangeEvaluation evaluate_range(const PreparedData& data, RowRange range,
                               const std::string& name, const MlpExpert& expert,
                               const PipelineConfig& config) {
    if (range.size() < 3)
        throw Error(ErrorKind::input, "range '" + name + "' has fewer than 3 rows");

    RangeEvaluation eval;
    eval.name = name;
    eval.dates.assign(data.dataset.dates.begin() + static_cast<long>(range.begin),
                      data.dataset.dates.begin() + static_cast<long>(range.end));
    eval.observed.reserve(range.size());
    eval.predicted.reserve(range.size());
    std::vector<double> price;
    price.reserve(range.size());
    for (std::size_t r = range.begin; r < range.end; ++r) {
        std::vector<double> row;
        row.reserve(data.dataset.columns.size());
        for (const FeatureColumn& col : data.dataset.columns)
            row.push_back(*col.values[r]);
        eval.predicted.push_back(forward(expert, row));
        eval.observed.push_back(*data.dataset.target.values[r]);
        price.push_back(data.row_price[r]);
    }

    // EP test: realized vs forecast returns of the target track, in the
    // configured convention.
    std::vector<double> y = realized_returns(eval.observed, config.return_kind);
    std::vector<double> y_hat =
        forecast_returns_of(eval.predicted, eval.observed, config.return_kind);
    try {
        eval.ep = ep_test(ReturnPair{y, y_hat});
    } catch (const DegenerateTestError& e) {
        eval.ep_degenerate = true;
        eval.degenerate_a = e.a_t();
        eval.degenerate_b = e.b_t();
    }

    // Backtest: positions from the forecast signs, compounding the simple
    // returns of the observed weekly price.
    std::vector<double> simple;
    simple.reserve(price.size() - 1);
    for (std::size_t t = 1; t < price.size(); ++t)
        simple.push_back(price[t] / price[t - 1] - 1.0);
    std::vector<int> sig = signals(y_hat);
    eval.curve = equity_curve(sig, simple, config.initial_capital, config.cost_rate,
                              eval.dates);
    eval.perfect = perfect_equity(simple, config.initial_capital, eval.dates);
    eval.report = metrics(eval.curve, eval.perfect, config.weeks_per_year);
    return eval;
}

TrainingOutcome train_and_select(const PipelineConfig& config, const PreparedData& data) {
    SampleSet train_rows;
    train_rows.feature_names = data.dataset.column_names();
    train_rows.target_name = data.dataset.target.name;
    train_rows.inputs = data.dataset.input_rows(data.dataset.train);
    train_rows.targets = data.dataset.target_values(data.dataset.train);

    std::vector<MlpExpert> experts = with_stage("train", [&] {
        return generate_experts(config.n_experts, config.base_seed, train_rows,
                                config.train, config.n_hidden);
    });

    auto test_score = [&](const MlpExpert& e) {
        RangeEvaluation eval = evaluate_range(data, data.dataset.test, "test", e, config);
        ExpertScore score;
        score.ep_degenerate = eval.ep_degenerate;
        score.ep_prob = eval.ep_degenerate ? 0.0 : eval.ep.prob;
        score.final_equity = eval.curve.final_value();
        return score;
    };

    TrainingOutcome outcome;
    SelectionResult selection = with_stage("select", [&] {
        return select_expert(experts, config.ep_threshold, test_score);
    });
    outcome.scores = selection.scores;
    outcome.ep_gate_passed = selection.any_passed_ep;
    outcome.expert = std::move(experts[selection.best_index]);
    outcome.selected_seed = outcome.expert.seed;
    outcome.equity_before_perturb = selection.scores[selection.best_index].final_equity;
    outcome.equity_after_perturb = outcome.equity_before_perturb;

    if (config.perturb_rounds > 0) {
        with_stage("perturb", [&] {
            auto equity_only = [&](const MlpExpert& e) {
                return evaluate_range(data, data.dataset.test, "test", e, config)
                    .curve.final_value();
            };
            outcome.expert = perturb_improve(
                outcome.expert, config.perturb_epsilon, config.perturb_rounds,
                config.base_seed + static_cast<std::uint64_t>(config.n_experts),
                equity_only);
            outcome.equity_after_perturb = equity_only(outcome.expert);
        });
    }
    return outcome;
}

std::string equity_csv_text(const RangeEvaluation& eval) {
    std::string out = "date,position,realized_return,equity,perfect_equity\n";
    const std::size_t rows = eval.dates.size();
    for (std::size_t i = 0; i < rows; ++i) {
        int position = i == 0 ? 0 : eval.curve.positions[i - 1];
        double realized = i == 0 ? 0.0
                                 : eval.perfect.period_returns[i - 1] *
                                       eval.perfect.positions[i - 1];
        out += to_iso(eval.dates[i]) + "," + std::to_string(position) + "," +
               format_compact(realized) + "," + format_compact(eval.curve.equity[i]) +
               "," + format_compact(eval.perfect.equity[i]) + "\n";
    }
    return out;
}

std::string summary_text(const RangeEvaluation& eval) {
    const BacktestReport& r = eval.report;
    std::string out;
    out += "Strategy results (" + eval.name + " range, " + to_iso(eval.dates.front()) +
           " .. " + to_iso(eval.dates.back()) + ")\n";
    out += "conventions: positions from forecast log-return signs; realized returns are "
           "simple weekly returns of the observed price; costs charged on position "
           "changes\n\n";
    auto line = [&out](const char* label, const std::string& value) {
        char buf[80];
        std::snprintf(buf, sizeof(buf), "%-34s %s\n", label, value.c_str());
        out += buf;
    };
    line("Observations (weeks)", std::to_string(r.observations));
    line("Hits", std::to_string(r.hits));
    line("Misses", std::to_string(r.misses));
    line("Hit rate", pct(r.hit_rate));
    line("Initial capital", money(r.initial_capital));
    line("Final capital", money(r.final_capital));
    line("Annualized return", pct(r.annualized_return));
    line("Mean negative volatility", pct(r.mean_negative_volatility));
    line("Perfect equity final", money(r.perfect_equity_final));
    line("Equity / Perfect equity", pct(r.equity_over_perfect));
    line("Max drawdown (single period)", pct(r.max_drawdown));
    line("Max drawdown (peak to trough)", pct(r.peak_to_trough_drawdown));
    out += "\n";
    if (eval.ep_degenerate) {
        line("EP test", "degenerate (one-sided forecasts or constant returns)");
        line("EP A_T", format_compact(eval.degenerate_a));
        line("EP B_T", format_compact(eval.degenerate_b));
    } else {
        line("EP statistic", format_compact(eval.ep.ep));
        line("EP probability", format_compact(eval.ep.prob));
    }
    return out;
}

std::string report_svg_text(const RangeEvaluation& eval) {
    ChartPanel prices;
    prices.title = "Observed vs predicted price (" + eval.name + " range)";
    prices.y_label = "price";
    prices.series.push_back(ChartSeries{"observed", eval.observed});
    prices.series.push_back(ChartSeries{"predicted", eval.predicted});

    ChartPanel equity;
    equity.title = "Equity vs perfect equity (" + eval.name + " range)";
    equity.y_label = "equity";
    equity.series.push_back(ChartSeries{"strategy", eval.curve.equity});
    equity.series.push_back(ChartSeries{"perfect", eval.perfect.equity});

    return render_chart_svg({prices, equity});
}

std::string build_manifest_json(const PipelineConfig& config, const PreparedData& data,
                                const TrainingOutcome& training,
                                const RangeEvaluation& test_eval,
                                const RangeEvaluation& new_eval,
                                const std::string& expert_text,
                                const std::string& timestamp) {
    json j;
    j["tool"] = "oilcast";
    j["version"] = kVersion;
    j["timestamp"] = timestamp;
    j["config"] = dump_config(config);

    json fits = json::array();
    for (std::size_t i = 0; i < data.fits.size(); ++i) {
        json f;
        f["id"] = config.series[i].id;
        f["degree"] = data.fits[i].degree;
        f["r_squared"] = data.fits[i].r_squared;
        f["coefficients"] = data.fits[i].coefficients;
        fits.push_back(f);
    }
    j["interpolation"] = fits;

    j["rows"]["total"] = data.dataset.rows();
    j["rows"]["train"] = data.dataset.train.size();
    j["rows"]["test"] = data.dataset.test.size();
    j["rows"]["new_data"] = data.dataset.new_data.size();
    j["calendar"]["start"] = to_iso(data.calendar.front());
    j["calendar"]["end"] = to_iso(data.calendar.back());
    j["calendar"]["weeks"] = data.calendar.size();

    json scores = json::array();
    for (const ExpertScore& s : training.scores) {
        json e;
        e["seed"] = s.seed;
        e["ep_degenerate"] = s.ep_degenerate;
        e["ep_prob"] = s.ep_prob;
        e["final_equity"] = s.final_equity;
        scores.push_back(e);
    }
    j["selection"]["scores"] = scores;
    j["selection"]["selected_seed"] = training.selected_seed;
    j["selection"]["ep_gate_passed"] = training.ep_gate_passed;
    j["selection"]["equity_before_perturb"] = training.equity_before_perturb;
    j["selection"]["equity_after_perturb"] = training.equity_after_perturb;

    j["test"]["ep"] = ep_to_json(test_eval);
    j["test"]["backtest"] = report_to_json(test_eval.report);
    j["new_data"]["ep"] = ep_to_json(new_eval);
    j["new_data"]["backtest"] = report_to_json(new_eval.report);

    j["expert_checksum"] = fnv1a64(expert_text);
    return j.dump(2) + "\n";
}

void write_file_atomic(const std::string& path, std::string_view content) {
    fs::path target(path);
    if (target.has_parent_path())
        fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error(ErrorKind::io, "cannot write '" + tmp.string() + "'");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out)
            throw Error(ErrorKind::io, "short write to '" + tmp.string() + "'");
    }
    fs::rename(tmp, target);
}

RunResult run_pipeline(const PipelineConfig& config) {
    RunResult result;
    result.data = prepare_data(config);
    result.training = train_and_select(config, result.data);

    with_stage("evaluate", [&] {
        result.test_eval = evaluate_range(result.data, result.data.dataset.test, "test",
                                          result.training.expert, config);
        result.new_eval = evaluate_range(result.data, result.data.dataset.new_data,
                                         "new_data", result.training.expert, config);
    });

    with_stage("report", [&] {
        std::string expert_text = save_expert(result.training.expert);
        result.manifest_json =
            build_manifest_json(config, result.data, result.training, result.test_eval,
                                result.new_eval, expert_text, utc_timestamp());
        fs::path out_dir(config.out_dir);
        auto emit = [&](const char* name, std::string_view content) {
            std::string path = (out_dir / name).string();
            write_file_atomic(path, content);
            result.written_files.push_back(path);
        };
        try {
            emit("expert.txt", expert_text);
            emit("equity.csv", equity_csv_text(result.new_eval));
            emit("summary.txt", summary_text(result.new_eval));
            emit("report.svg", report_svg_text(result.new_eval));
            emit("manifest.json", result.manifest_json);
        } catch (...) {
            for (const std::string& written : result.written_files)
                fs::remove(written);
            throw;
        }
    });
    return result;
}

} // namespace oilcast
