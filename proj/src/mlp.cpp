#include "oilcast/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>

#include "oilcast/errors.hpp"
#include "oilcast/rng.hpp"
#include "oilcast/text.hpp"

namespace oilcast {

namespace {

constexpr double kWeightExplosionLimit = 1e6;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Scaled-space forward pass; fills `hidden` (resized by caller).
double forward_scaled(const MlpExpert& e, std::span<const double> x_scaled,
                      std::vector<double>& hidden) {
    for (int j = 0; j < e.n_hidden; ++j) {
        double pre = e.b1[static_cast<std::size_t>(j)];
        const double* row = e.w1.data() + static_cast<std::size_t>(j) * e.n_inputs;
        for (int k = 0; k < e.n_inputs; ++k)
            pre += row[k] * x_scaled[static_cast<std::size_t>(k)];
        hidden[static_cast<std::size_t>(j)] = sigmoid(pre);
    }
    double pre = e.b2;
    for (int j = 0; j < e.n_hidden; ++j)
        pre += e.w2[static_cast<std::size_t>(j)] * hidden[static_cast<std::size_t>(j)];
    return sigmoid(pre);
}

void require_scaled(const MlpExpert& e) {
    if (!e.scaled)
        throw Error(ErrorKind::state, "expert has no fitted scaling");
}

std::vector<std::vector<double>> scale_rows(const MlpExpert& e, const SampleSet& data) {
    std::vector<std::vector<double>> rows(data.size());
    for (std::size_t r = 0; r < data.size(); ++r) {
        rows[r].resize(static_cast<std::size_t>(e.n_inputs));
        for (int k = 0; k < e.n_inputs; ++k)
            rows[r][static_cast<std::size_t>(k)] =
                scale_value(e.input_scaling[static_cast<std::size_t>(k)],
                            data.inputs[r][static_cast<std::size_t>(k)]);
    }
    return rows;
}

bool parameters_healthy(const MlpExpert& e) {
    auto ok = [](double v) {
        return std::isfinite(v) && std::abs(v) <= kWeightExplosionLimit;
    };
    for (double v : e.w1)
        if (!ok(v))
            return false;
    for (double v : e.b1)
        if (!ok(v))
            return false;
    for (double v : e.w2)
        if (!ok(v))
            return false;
    return ok(e.b2);
}

} // namespace

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0))
        throw Error(ErrorKind::input, "learning_rate must be positive");
    if (!(error_margin > 0.0) || !(error_margin < 1.0))
        throw Error(ErrorKind::input, "error_margin must be in (0, 1)");
    if (!(initial_weight_range > 0.0))
        throw Error(ErrorKind::input, "initial_weight_range must be positive");
    if (max_epochs < 1)
        throw Error(ErrorKind::input, "max_epochs must be >= 1");
    if (!(convergence_fraction > 0.0) || convergence_fraction > 1.0)
        throw Error(ErrorKind::input, "convergence_fraction must be in (0, 1]");
}

void SampleSet::validate() const {
    if (inputs.empty())
        throw Error(ErrorKind::input, "sample set is empty");
    if (targets.size() != inputs.size())
        throw Error(ErrorKind::input, "inputs and targets row counts differ");
    for (const auto& row : inputs)
        if (row.size() != feature_names.size())
            throw Error(ErrorKind::input, "ragged sample row");
}

MlpExpert init_expert(int n_inputs, int n_hidden, double range, std::uint64_t seed) {
    if (n_inputs < 1 || n_hidden < 1)
        throw Error(ErrorKind::input, "network dimensions must be >= 1");
    if (!(range > 0.0))
        throw Error(ErrorKind::input, "initial weight range must be positive");
    MlpExpert e;
    e.n_inputs = n_inputs;
    e.n_hidden = n_hidden;
    e.seed = seed;
    e.w1.resize(static_cast<std::size_t>(n_hidden) * n_inputs);
    e.b1.resize(static_cast<std::size_t>(n_hidden));
    e.w2.resize(static_cast<std::size_t>(n_hidden));
    // Fixed draw order (W1 row-major, b1, W2, b2) keeps the expert a pure
    // function of its seed.
    SplitMix64 rng(seed);
    for (double& w : e.w1)
        w = rng.uniform(-range, range);
    for (double& w : e.b1)
        w = rng.uniform(-range, range);
    for (double& w : e.w2)
        w = rng.uniform(-range, range);
    e.b2 = rng.uniform(-range, range);
    return e;
}

void fit_scaling(MlpExpert& expert, const SampleSet& train) {
    train.validate();
    if (train.feature_names.size() != static_cast<std::size_t>(expert.n_inputs))
        throw Error(ErrorKind::input, "sample width does not match the network inputs");
    expert.input_scaling.clear();
    for (std::size_t k = 0; k < train.feature_names.size(); ++k) {
        double lo = train.inputs[0][k], hi = train.inputs[0][k];
        for (const auto& row : train.inputs) {
            lo = std::min(lo, row[k]);
            hi = std::max(hi, row[k]);
        }
        if (!(lo < hi))
            throw Error(ErrorKind::scaling,
                        "feature '" + train.feature_names[k] + "' is constant on the train range");
        expert.input_scaling.push_back(ScaleParam{train.feature_names[k], lo, hi});
    }
    double lo = train.targets.front(), hi = train.targets.front();
    for (double t : train.targets) {
        lo = std::min(lo, t);
        hi = std::max(hi, t);
    }
    if (!(lo < hi))
        throw Error(ErrorKind::scaling,
                    "target '" + train.target_name + "' is constant on the train range");
    expert.output_scaling = ScaleParam{train.target_name, lo, hi};
    expert.scaled = true;
}

double scale_value(const ScaleParam& p, double raw) {
    return kScaleLow + kScaleSpan * (raw - p.min) / (p.max - p.min);
}

double descale_value(const ScaleParam& p, double scaled) {
    return p.min + (scaled - kScaleLow) / kScaleSpan * (p.max - p.min);
}

double forward(const MlpExpert& expert, std::span<const double> x) {
    require_scaled(expert);
    if (x.size() != static_cast<std::size_t>(expert.n_inputs))
        throw Error(ErrorKind::input, "input row width does not match the network");
    std::vector<double> x_scaled(x.size());
    for (std::size_t k = 0; k < x.size(); ++k)
        x_scaled[k] = scale_value(expert.input_scaling[k], x[k]);
    std::vector<double> hidden(static_cast<std::size_t>(expert.n_hidden));
    double out = forward_scaled(expert, x_scaled, hidden);
    return descale_value(expert.output_scaling, out);
}

Gradients backprop_gradients(const MlpExpert& expert, std::span<const double> x_scaled,
                             double target_scaled) {
    if (x_scaled.size() != static_cast<std::size_t>(expert.n_inputs))
        throw Error(ErrorKind::input, "input row width does not match the network");
    std::vector<double> hidden(static_cast<std::size_t>(expert.n_hidden));
    double out = forward_scaled(expert, x_scaled, hidden);

    Gradients g;
    g.w1.resize(expert.w1.size());
    g.b1.resize(expert.b1.size());
    g.w2.resize(expert.w2.size());

    // d/dz of 0.5*(out - t)^2 through the output sigmoid
    double delta_out = (out - target_scaled) * out * (1.0 - out);
    g.b2 = delta_out;
    for (int j = 0; j < expert.n_hidden; ++j) {
        std::size_t js = static_cast<std::size_t>(j);
        g.w2[js] = delta_out * hidden[js];
        double delta_h = delta_out * expert.w2[js] * hidden[js] * (1.0 - hidden[js]);
        g.b1[js] = delta_h;
        double* grow = g.w1.data() + js * expert.n_inputs;
        for (int k = 0; k < expert.n_inputs; ++k)
            grow[k] = delta_h * x_scaled[static_cast<std::size_t>(k)];
    }
    return g;
}

void train(MlpExpert& expert, const SampleSet& train_rows, const TrainConfig& cfg) {
    cfg.validate();
    require_scaled(expert);
    train_rows.validate();

    const std::vector<std::vector<double>> x = scale_rows(expert, train_rows);
    std::vector<double> t(train_rows.size());
    for (std::size_t r = 0; r < train_rows.size(); ++r)
        t[r] = scale_value(expert.output_scaling, train_rows.targets[r]);

    const double tolerance = cfg.error_margin * kScaleSpan;
    std::vector<double> hidden(static_cast<std::size_t>(expert.n_hidden));

    for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        for (std::size_t r = 0; r < x.size(); ++r) {
            double out = forward_scaled(expert, x[r], hidden);
            double delta_out = (out - t[r]) * out * (1.0 - out);
            const double lr = cfg.learning_rate;
            for (int j = 0; j < expert.n_hidden; ++j) {
                std::size_t js = static_cast<std::size_t>(j);
                double delta_h =
                    delta_out * expert.w2[js] * hidden[js] * (1.0 - hidden[js]);
                expert.w2[js] -= lr * delta_out * hidden[js];
                expert.b1[js] -= lr * delta_h;
                double* wrow = expert.w1.data() + js * expert.n_inputs;
                const double* xr = x[r].data();
                for (int k = 0; k < expert.n_inputs; ++k)
                    wrow[k] -= lr * delta_h * xr[k];
            }
            expert.b2 -= lr * delta_out;
        }
        if (!parameters_healthy(expert))
            throw Error(ErrorKind::training,
                        "training diverged at epoch " + std::to_string(epoch));
        std::size_t within = 0;
        for (std::size_t r = 0; r < x.size(); ++r) {
            double out = forward_scaled(expert, x[r], hidden);
            if (std::abs(out - t[r]) <= tolerance)
                ++within;
        }
        double fraction = static_cast<double>(within) / static_cast<double>(x.size());
        expert.training_history.push_back(EpochStat{epoch, fraction});
        if (fraction >= cfg.convergence_fraction)
            break;
    }
}

std::vector<MlpExpert> generate_experts(int n, std::uint64_t base_seed,
                                        const SampleSet& train_rows,
                                        const TrainConfig& cfg, int n_hidden) {
    if (n < 1)
        throw Error(ErrorKind::input, "expert count must be >= 1");
    cfg.validate();
    train_rows.validate();
    const int n_inputs = static_cast<int>(train_rows.feature_names.size());
    const int hidden_units = n_hidden > 0 ? n_hidden : n_inputs;

    std::vector<MlpExpert> experts(static_cast<std::size_t>(n));
    std::vector<std::exception_ptr> failures(static_cast<std::size_t>(n));

    auto build_one = [&](int i) {
        try {
            MlpExpert e = init_expert(n_inputs, hidden_units, cfg.initial_weight_range,
                                      base_seed + static_cast<std::uint64_t>(i));
            fit_scaling(e, train_rows);
            train(e, train_rows, cfg);
            experts[static_cast<std::size_t>(i)] = std::move(e);
        } catch (const Error& err) {
            failures[static_cast<std::size_t>(i)] = std::make_exception_ptr(
                Error(err.kind(), "expert " + std::to_string(i) + " (seed " +
                                      std::to_string(base_seed + static_cast<std::uint64_t>(i)) +
                                      "): " + err.what()));
        } catch (...) {
            failures[static_cast<std::size_t>(i)] = std::current_exception();
        }
    };

    unsigned pool = std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()),
                                       static_cast<unsigned>(n));
    if (pool <= 1) {
        for (int i = 0; i < n; ++i)
            build_one(i);
    } else {
        std::vector<std::thread> workers;
        workers.reserve(pool);
        for (unsigned w = 0; w < pool; ++w)
            workers.emplace_back([&, w] {
                for (int i = static_cast<int>(w); i < n; i += static_cast<int>(pool))
                    build_one(i);
            });
        for (std::thread& worker : workers)
            worker.join();
    }
    for (const std::exception_ptr& failure : failures)
        if (failure)
            std::rethrow_exception(failure);
    return experts;
}

SelectionResult select_expert(const std::vector<MlpExpert>& experts, double ep_threshold,
                              const ExpertScorer& scorer) {
    if (experts.empty())
        throw Error(ErrorKind::input, "no experts to select from");

    SelectionResult result;
    result.scores.reserve(experts.size());
    for (std::size_t i = 0; i < experts.size(); ++i) {
        try {
            ExpertScore score = scorer(experts[i]);
            score.seed = experts[i].seed;
            result.scores.push_back(score);
        } catch (const std::exception& ex) {
            throw Error(ErrorKind::selection,
                        "scoring expert " + std::to_string(i) + " (seed " +
                            std::to_string(experts[i].seed) + ") failed: " + ex.what());
        }
    }

    auto better = [](const ExpertScore& a, const ExpertScore& b) {
        if (a.final_equity != b.final_equity)
            return a.final_equity > b.final_equity;
        return a.seed < b.seed;
    };

    std::size_t best = experts.size();
    for (std::size_t i = 0; i < experts.size(); ++i) {
        if (!result.scores[i].ep_passed(ep_threshold))
            continue;
        if (best == experts.size() || better(result.scores[i], result.scores[best]))
            best = i;
    }
    result.any_passed_ep = best != experts.size();
    if (!result.any_passed_ep) {
        best = 0;
        for (std::size_t i = 1; i < experts.size(); ++i)
            if (better(result.scores[i], result.scores[best]))
                best = i;
    }
    result.best_index = best;
    return result;
}

MlpExpert perturb_improve(const MlpExpert& expert, double epsilon, int rounds,
                          std::uint64_t seed,
                          const std::function<double(const MlpExpert&)>& equity_score) {
    if (!(epsilon > 0.0))
        throw Error(ErrorKind::input, "epsilon must be positive");
    if (rounds < 1)
        throw Error(ErrorKind::input, "rounds must be >= 1");
    require_scaled(expert);

    MlpExpert current = expert;
    double current_score = equity_score(current);
    SplitMix64 rng(seed);
    for (int round = 0; round < rounds; ++round) {
        MlpExpert candidate = current;
        for (double& w : candidate.w1)
            w += rng.uniform(-epsilon, epsilon);
        for (double& w : candidate.b1)
            w += rng.uniform(-epsilon, epsilon);
        for (double& w : candidate.w2)
            w += rng.uniform(-epsilon, epsilon);
        candidate.b2 += rng.uniform(-epsilon, epsilon);
        double score = equity_score(candidate);
        if (score > current_score) {
            current = std::move(candidate);
            current_score = score;
        }
    }
    return current;
}

namespace {

void append_values(std::string& out, std::span<const double> values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i)
            out += ' ';
        out += format_double(values[i]);
    }
    out += '\n';
}

std::string checksum_line(std::string_view body) {
    static const char* hex = "0123456789abcdef";
    std::uint64_t h = fnv1a64(body);
    std::string line = "checksum ";
    for (int shift = 60; shift >= 0; shift -= 4)
        line += hex[(h >> shift) & 0xF];
    line += '\n';
    return line;
}

} // namespace

std::string save_expert(const MlpExpert& expert) {
    require_scaled(expert);
    auto check_name = [](const std::string& name) {
        if (name.empty() || name.find_first_of(" \t\r\n") != std::string::npos)
            throw Error(ErrorKind::format, "scale name '" + name +
                                               "' is empty or contains whitespace");
    };

    std::string out = "OILCAST-MLP v1\n";
    out += "in=" + std::to_string(expert.n_inputs) + " hidden=" +
           std::to_string(expert.n_hidden) + " out=1 seed=" + std::to_string(expert.seed) +
           "\n";
    for (const ScaleParam& p : expert.input_scaling) {
        check_name(p.name);
        out += "scale " + p.name + " " + format_double(p.min) + " " +
               format_double(p.max) + "\n";
    }
    check_name(expert.output_scaling.name);
    out += "scale " + expert.output_scaling.name + " " +
           format_double(expert.output_scaling.min) + " " +
           format_double(expert.output_scaling.max) + "\n";
    out += "W1\n";
    for (int j = 0; j < expert.n_hidden; ++j)
        append_values(out, std::span<const double>(
                               expert.w1.data() + static_cast<std::size_t>(j) * expert.n_inputs,
                               static_cast<std::size_t>(expert.n_inputs)));
    out += "b1\n";
    append_values(out, expert.b1);
    out += "W2\n";
    append_values(out, expert.w2);
    out += "b2\n";
    append_values(out, std::span<const double>(&expert.b2, 1));
    out += checksum_line(out);
    return out;
}

MlpExpert load_expert(std::string_view text) {
    auto fail = [](const std::string& why) -> MlpExpert {
        throw Error(ErrorKind::format, "expert file: " + why);
    };

    // Verify the trailing checksum over everything before it.
    std::size_t pos = text.rfind("checksum ");
    if (pos == std::string_view::npos || (pos != 0 && text[pos - 1] != '\n'))
        return fail("missing checksum line");
    std::string_view body = text.substr(0, pos);
    std::string_view stored_line = text.substr(pos + 9);
    if (std::size_t nl = stored_line.find('\n'); nl != std::string_view::npos)
        stored_line = stored_line.substr(0, nl);
    std::string_view stored = trim(stored_line);
    if (checksum_line(body) != "checksum " + std::string(stored) + "\n")
        return fail("checksum mismatch");

    std::vector<std::string_view> lines;
    for (std::string_view piece : split(body, '\n'))
        lines.push_back(trim(piece));
    while (!lines.empty() && lines.back().empty())
        lines.pop_back();

    std::size_t at = 0;
    auto next_line = [&]() -> std::string_view {
        if (at >= lines.size())
            fail("truncated document");
        return lines[at++];
    };

    if (next_line() != "OILCAST-MLP v1")
        return fail("unsupported header/version");

    MlpExpert e;
    {
        std::vector<std::string_view> tokens = split(next_line(), ' ');
        if (tokens.size() != 4)
            return fail("malformed topology line");
        auto field = [&](std::string_view token, std::string_view key) -> long long {
            if (token.substr(0, key.size()) != key)
                fail("malformed topology line");
            auto v = parse_integer(token.substr(key.size()));
            if (!v)
                fail("malformed topology line");
            return *v;
        };
        e.n_inputs = static_cast<int>(field(tokens[0], "in="));
        e.n_hidden = static_cast<int>(field(tokens[1], "hidden="));
        if (field(tokens[2], "out=") != 1)
            return fail("only one output is supported");
        e.seed = static_cast<std::uint64_t>(field(tokens[3], "seed="));
        if (e.n_inputs < 1 || e.n_hidden < 1)
            return fail("bad dimensions");
    }

    std::vector<ScaleParam> scales;
    while (at < lines.size() && lines[at].substr(0, 6) == "scale ") {
        std::vector<std::string_view> tokens = split(lines[at], ' ');
        if (tokens.size() != 4)
            return fail("malformed scale line");
        auto lo = parse_double(tokens[2]);
        auto hi = parse_double(tokens[3]);
        if (!lo || !hi || !(*lo < *hi))
            return fail("bad scale bounds for '" + std::string(tokens[1]) + "'");
        scales.push_back(ScaleParam{std::string(tokens[1]), *lo, *hi});
        ++at;
    }
    if (scales.size() != static_cast<std::size_t>(e.n_inputs) + 1)
        return fail("expected " + std::to_string(e.n_inputs + 1) + " scale lines, got " +
                    std::to_string(scales.size()));
    e.output_scaling = scales.back();
    scales.pop_back();
    e.input_scaling = std::move(scales);

    auto parse_row = [&](std::size_t count, double* dest) {
        std::vector<std::string_view> tokens = split(next_line(), ' ');
        if (tokens.size() != count)
            fail("weight row has wrong width");
        for (std::size_t i = 0; i < count; ++i) {
            auto v = parse_double(tokens[i]);
            if (!v || !std::isfinite(*v))
                fail("unparsable weight value");
            dest[i] = *v;
        }
    };

    if (next_line() != "W1")
        return fail("expected W1 block");
    e.w1.resize(static_cast<std::size_t>(e.n_hidden) * e.n_inputs);
    for (int j = 0; j < e.n_hidden; ++j)
        parse_row(static_cast<std::size_t>(e.n_inputs),
                  e.w1.data() + static_cast<std::size_t>(j) * e.n_inputs);
    if (next_line() != "b1")
        return fail("expected b1 block");
    e.b1.resize(static_cast<std::size_t>(e.n_hidden));
    parse_row(e.b1.size(), e.b1.data());
    if (next_line() != "W2")
        return fail("expected W2 block");
    e.w2.resize(static_cast<std::size_t>(e.n_hidden));
    parse_row(e.w2.size(), e.w2.data());
    if (next_line() != "b2")
        return fail("expected b2 block");
    parse_row(1, &e.b2);
    if (at != lines.size())
        return fail("trailing content after b2");

    e.scaled = true;
    return e;
}

} // namespace oilcast
