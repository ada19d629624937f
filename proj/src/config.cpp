#include "oilcast/config.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "oilcast/errors.hpp"
#include "oilcast/text.hpp"

namespace oilcast {

namespace {

namespace fs = std::filesystem;

[[noreturn]] void fail(std::size_t line, const std::string& why) {
    throw Error(ErrorKind::config, "config line " + std::to_string(line) + ": " + why);
}

Frequency parse_frequency(std::string_view v, std::size_t line) {
    if (v == "weekly")
        return Frequency::weekly;
    if (v == "quarterly")
        return Frequency::quarterly;
    if (v == "annual")
        return Frequency::annual;
    fail(line, "unknown frequency '" + std::string(v) + "'");
}

std::vector<int> parse_int_list(std::string_view v, std::size_t line) {
    std::vector<int> out;
    for (std::string_view piece : split(v, ',')) {
        auto n = parse_integer(trim(piece));
        if (!n)
            fail(line, "unparsable integer list '" + std::string(v) + "'");
        out.push_back(static_cast<int>(*n));
    }
    return out;
}

double parse_num(std::string_view v, std::size_t line) {
    auto d = parse_double(v);
    if (!d)
        fail(line, "unparsable number '" + std::string(v) + "'");
    return *d;
}

long long parse_int(std::string_view v, std::size_t line) {
    auto n = parse_integer(v);
    if (!n)
        fail(line, "unparsable integer '" + std::string(v) + "'");
    return *n;
}

std::string join_ints(const std::vector<int>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i)
            out += ",";
        out += std::to_string(v[i]);
    }
    return out;
}

} // namespace

void PipelineConfig::validate() const {
    auto bad = [](const std::string& why) { throw Error(ErrorKind::config, why); };
    if (series.empty())
        bad("no [series] sections");
    for (const SeriesConfig& s : series) {
        if (s.path.empty())
            bad("series '" + s.id + "' has no file");
        if (s.sma_windows.empty() && s.lags.empty())
            bad("series '" + s.id + "' contributes no columns");
        for (int w : s.sma_windows)
            if (w < 1)
                bad("series '" + s.id + "' has an sma window < 1");
        for (int k : s.lags)
            if (k < 0)
                bad("series '" + s.id + "' has a negative lag");
        if (s.max_degree < 1 || s.max_degree > 8)
            bad("series '" + s.id + "' max_degree must be in [1, 8]");
        if (!(s.r2_threshold > 0.0) || s.r2_threshold > 1.0)
            bad("series '" + s.id + "' r2_threshold must be in (0, 1]");
        int dup = 0;
        for (const SeriesConfig& other : series)
            if (other.id == s.id)
                ++dup;
        if (dup != 1)
            bad("duplicate series id '" + s.id + "'");
    }
    if (target_series.empty())
        bad("missing [target] series");
    bool found = false;
    for (const SeriesConfig& s : series)
        found = found || s.id == target_series;
    if (!found)
        bad("target references undeclared series '" + target_series + "'");
    if (target_window < 1 || target_horizon < 1)
        bad("target window and horizon must be >= 1");
    if (!(train_frac > 0.0) || train_frac >= 1.0 || !(test_frac > 0.0) || test_frac >= 1.0)
        bad("fractions must be in (0, 1)");
    train.validate();
    if (n_experts < 1)
        bad("n_experts must be >= 1");
    if (n_hidden < 0)
        bad("n_hidden must be >= 0");
    if (!(ep_threshold >= 0.0) || ep_threshold > 1.0)
        bad("ep_threshold must be in [0, 1]");
    if (perturb_rounds < 0)
        bad("perturb_rounds must be >= 0");
    if (!(perturb_epsilon > 0.0))
        bad("perturb_epsilon must be positive");
    if (!(cost_rate >= 0.0) || cost_rate >= 1.0)
        bad("cost_rate must be in [0, 1)");
    if (!(initial_capital > 0.0))
        bad("initial_capital must be positive");
    if (!(weeks_per_year > 0.0))
        bad("weeks_per_year must be positive");
    if (out_dir.empty())
        bad("out_dir must not be empty");
}

const SeriesConfig& PipelineConfig::target_config() const {
    for (const SeriesConfig& s : series)
        if (s.id == target_series)
            return s;
    throw Error(ErrorKind::config, "target references undeclared series '" + target_series + "'");
}

PipelineConfig parse_config_text(std::string_view text, const std::string& base_dir,
                                 bool check_files) {
    PipelineConfig cfg;
    cfg.series.clear();

    enum class Section { none, series, target, train, backtest };
    Section section = Section::none;
    SeriesConfig* current = nullptr;

    std::vector<std::string_view> lines = split(text, '\n');
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        std::string_view line = trim(lines[i]);
        if (line.empty() || line.front() == '#')
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                fail(line_no, "unterminated section header");
            std::string_view name = trim(line.substr(1, line.size() - 2));
            if (name.substr(0, 7) == "series ") {
                std::string id = std::string(trim(name.substr(7)));
                if (id.empty() || id.find_first_of(" \t") != std::string::npos)
                    fail(line_no, "bad series id '" + id + "'");
                cfg.series.push_back(SeriesConfig{});
                cfg.series.back().id = id;
                current = &cfg.series.back();
                section = Section::series;
            } else if (name == "target") {
                section = Section::target;
            } else if (name == "train") {
                section = Section::train;
            } else if (name == "backtest") {
                section = Section::backtest;
            } else {
                fail(line_no, "unknown section '[" + std::string(name) + "]'");
            }
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            fail(line_no, "expected 'key = value'");
        std::string_view key = trim(line.substr(0, eq));
        std::string_view value = trim(line.substr(eq + 1));
        if (key.empty())
            fail(line_no, "empty key");

        switch (section) {
        case Section::none:
            fail(line_no, "key outside any section");
        case Section::series:
            if (key == "file")
                current->path = std::string(value);
            else if (key == "frequency")
                current->frequency = parse_frequency(value, line_no);
            else if (key == "units")
                current->units = std::string(value);
            else if (key == "sma")
                current->sma_windows = parse_int_list(value, line_no);
            else if (key == "lags")
                current->lags = parse_int_list(value, line_no);
            else if (key == "max_degree")
                current->max_degree = static_cast<int>(parse_int(value, line_no));
            else if (key == "r2_threshold")
                current->r2_threshold = parse_num(value, line_no);
            else
                fail(line_no, "unknown series key '" + std::string(key) + "'");
            break;
        case Section::target:
            if (key == "series")
                cfg.target_series = std::string(value);
            else if (key == "window")
                cfg.target_window = static_cast<int>(parse_int(value, line_no));
            else if (key == "horizon")
                cfg.target_horizon = static_cast<int>(parse_int(value, line_no));
            else if (key == "returns") {
                if (value == "log")
                    cfg.return_kind = ReturnKind::logarithmic;
                else if (value == "simple")
                    cfg.return_kind = ReturnKind::simple;
                else
                    fail(line_no, "returns must be 'log' or 'simple'");
            } else
                fail(line_no, "unknown target key '" + std::string(key) + "'");
            break;
        case Section::train:
            if (key == "learning_rate")
                cfg.train.learning_rate = parse_num(value, line_no);
            else if (key == "error_margin")
                cfg.train.error_margin = parse_num(value, line_no);
            else if (key == "initial_weight_range")
                cfg.train.initial_weight_range = parse_num(value, line_no);
            else if (key == "max_epochs")
                cfg.train.max_epochs = static_cast<int>(parse_int(value, line_no));
            else if (key == "convergence_fraction")
                cfg.train.convergence_fraction = parse_num(value, line_no);
            else if (key == "train_frac")
                cfg.train_frac = parse_num(value, line_no);
            else if (key == "test_frac")
                cfg.test_frac = parse_num(value, line_no);
            else if (key == "n_experts")
                cfg.n_experts = static_cast<int>(parse_int(value, line_no));
            else if (key == "base_seed")
                cfg.base_seed = static_cast<std::uint64_t>(parse_int(value, line_no));
            else if (key == "n_hidden")
                cfg.n_hidden = static_cast<int>(parse_int(value, line_no));
            else if (key == "ep_threshold")
                cfg.ep_threshold = parse_num(value, line_no);
            else if (key == "perturb_rounds")
                cfg.perturb_rounds = static_cast<int>(parse_int(value, line_no));
            else if (key == "perturb_epsilon")
                cfg.perturb_epsilon = parse_num(value, line_no);
            else
                fail(line_no, "unknown train key '" + std::string(key) + "'");
            break;
        case Section::backtest:
            if (key == "cost_rate")
                cfg.cost_rate = parse_num(value, line_no);
            else if (key == "initial_capital")
                cfg.initial_capital = parse_num(value, line_no);
            else if (key == "weeks_per_year")
                cfg.weeks_per_year = parse_num(value, line_no);
            else if (key == "out_dir")
                cfg.out_dir = std::string(value);
            else
                fail(line_no, "unknown backtest key '" + std::string(key) + "'");
            break;
        }
    }

    for (SeriesConfig& s : cfg.series) {
        if (s.path.empty())
            throw Error(ErrorKind::config, "series '" + s.id + "' is missing 'file'");
        fs::path p(s.path);
        if (p.is_relative() && !base_dir.empty())
            p = fs::path(base_dir) / p;
        s.path = p.lexically_normal().string();
        if (check_files && !fs::exists(s.path))
            throw Error(ErrorKind::config,
                        "series '" + s.id + "' references missing file '" + s.path + "'");
    }
    cfg.validate();
    return cfg;
}

PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorKind::io, "cannot open config '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string base = fs::absolute(fs::path(path)).parent_path().string();
    return parse_config_text(buf.str(), base);
}

std::string dump_config(const PipelineConfig& cfg) {
    std::string out;
    for (const SeriesConfig& s : cfg.series) {
        out += "[series " + s.id + "]\n";
        out += "file = " + s.path + "\n";
        out += "frequency = " + std::string(to_string(s.frequency)) + "\n";
        if (!s.units.empty())
            out += "units = " + s.units + "\n";
        out += "sma = " + join_ints(s.sma_windows) + "\n";
        out += "lags = " + join_ints(s.lags) + "\n";
        out += "max_degree = " + std::to_string(s.max_degree) + "\n";
        out += "r2_threshold = " + format_compact(s.r2_threshold) + "\n";
        out += "\n";
    }
    out += "[target]\n";
    out += "series = " + cfg.target_series + "\n";
    out += "window = " + std::to_string(cfg.target_window) + "\n";
    out += "horizon = " + std::to_string(cfg.target_horizon) + "\n";
    out += "returns = " + std::string(to_string(cfg.return_kind)) + "\n\n";
    out += "[train]\n";
    out += "learning_rate = " + format_compact(cfg.train.learning_rate) + "\n";
    out += "error_margin = " + format_compact(cfg.train.error_margin) + "\n";
    out += "initial_weight_range = " + format_compact(cfg.train.initial_weight_range) + "\n";
    out += "max_epochs = " + std::to_string(cfg.train.max_epochs) + "\n";
    out += "convergence_fraction = " + format_compact(cfg.train.convergence_fraction) + "\n";
    out += "train_frac = " + format_compact(cfg.train_frac) + "\n";
    out += "test_frac = " + format_compact(cfg.test_frac) + "\n";
    out += "n_experts = " + std::to_string(cfg.n_experts) + "\n";
    out += "base_seed = " + std::to_string(cfg.base_seed) + "\n";
    out += "n_hidden = " + std::to_string(cfg.n_hidden) + "\n";
    out += "ep_threshold = " + format_compact(cfg.ep_threshold) + "\n";
    out += "perturb_rounds = " + std::to_string(cfg.perturb_rounds) + "\n";
    out += "perturb_epsilon = " + format_compact(cfg.perturb_epsilon) + "\n\n";
    out += "[backtest]\n";
    out += "cost_rate = " + format_compact(cfg.cost_rate) + "\n";
    out += "initial_capital = " + format_compact(cfg.initial_capital) + "\n";
    out += "weeks_per_year = " + format_compact(cfg.weeks_per_year) + "\n";
    out += "out_dir = " + cfg.out_dir + "\n";
    return out;
}

} // namespace oilcast
