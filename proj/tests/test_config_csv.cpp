#include <fstream>
#include <doctest.h>

#include "oilcast/config.hpp"
#include "oilcast/csv.hpp"
#include "oilcast/errors.hpp"
#include "support/tempdir.hpp"

using namespace oilcast;
using oilcast::testsupport::TempDir;

namespace {

void write(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

} // namespace

TEST_CASE("csv ingestion") {
    SUBCASE("nine annual rows") {
        std::string text = "date,value\n";
        for (int y = 1997; y <= 2005; ++y)
            text += std::to_string(y) + "-01-01," + std::to_string(y - 1990) + ".5\n";
        TimeSeries s = parse_series_csv(text, Frequency::annual, "gasto", "millones Bs",
                                        "gasto.csv");
        CHECK(s.points.size() == 9);
        CHECK(s.frequency == Frequency::annual);
        CHECK(s.points[0].value == doctest::Approx(7.5));
        CHECK(to_iso(s.points.back().date) == "2005-01-01");
    }
    SUBCASE("out-of-order rows cite the row") {
        std::string text = "date,value\n2000-01-03,1\n2000-01-10,2\n2000-01-07,3\n";
        CHECK_THROWS_WITH_AS(parse_series_csv(text, Frequency::weekly, "x", "", "x.csv"),
                             doctest::Contains("row 4"), Error);
    }
    SUBCASE("duplicate date cites the row") {
        std::string text = "date,value\n2000-01-03,1\n2000-01-03,2\n";
        CHECK_THROWS_WITH_AS(parse_series_csv(text, Frequency::weekly, "x", "", "x.csv"),
                             doctest::Contains("row 3"), Error);
    }
    SUBCASE("a 14-day gap breaks weekly consistency") {
        std::string text = "date,value\n2000-01-03,1\n2000-01-10,2\n2000-01-24,3\n";
        CHECK_THROWS_WITH_AS(parse_series_csv(text, Frequency::weekly, "x", "", "x.csv"),
                             doctest::Contains("inconsistent"), Error);
    }
    SUBCASE("unparsable value cites the row") {
        std::string text = "date,value\n2000-01-03,1\n2000-01-10,2,5\n";
        CHECK_THROWS_WITH_AS(parse_series_csv(text, Frequency::weekly, "x", "", "x.csv"),
                             doctest::Contains("row 3"), Error);
        text = "date,value\n2000-01-03,abc\n";
        CHECK_THROWS_WITH_AS(parse_series_csv(text, Frequency::weekly, "x", "", "x.csv"),
                             doctest::Contains("row 2"), Error);
    }
    SUBCASE("header is mandatory") {
        CHECK_THROWS_AS(parse_series_csv("time,price\n2000-01-03,1\n", Frequency::weekly,
                                         "x", "", "x.csv"),
                        Error);
    }
    SUBCASE("CRLF and BOM are tolerated") {
        std::string text = "\xEF\xBB\xBF" "date,value\r\n2000-01-03,1.5\r\n2000-01-10,2.5\r\n";
        TimeSeries s = parse_series_csv(text, Frequency::weekly, "x", "", "x.csv");
        CHECK(s.points.size() == 2);
        CHECK(s.points[1].value == 2.5);
    }
    SUBCASE("round trip through series_to_csv") {
        std::string text = "date,value\n2000-01-03,1.125\n2000-01-10,2.25\n";
        TimeSeries s = parse_series_csv(text, Frequency::weekly, "x", "", "x.csv");
        TimeSeries back = parse_series_csv(series_to_csv(s), Frequency::weekly, "x", "",
                                           "mem");
        REQUIRE(back.points.size() == s.points.size());
        for (std::size_t i = 0; i < s.points.size(); ++i) {
            CHECK(back.points[i].date == s.points[i].date);
            CHECK(back.points[i].value == s.points[i].value);
        }
    }
    SUBCASE("missing file is an io error") {
        CHECK_THROWS_AS(ingest_csv("/nonexistent/nowhere.csv", Frequency::weekly), Error);
    }
}

TEST_CASE("config parsing") {
    TempDir dir("config");
    write(dir.file("precio.csv"), "date,value\n1997-01-06,26.62\n1997-01-13,26.62\n");

    std::string minimal = "[series precio]\n"
                          "file = precio.csv\n"
                          "frequency = weekly\n"
                          "[target]\n"
                          "series = precio\n";
    write(dir.file("config.ini"), minimal);

    SUBCASE("defaults are filled") {
        PipelineConfig cfg = load_config(dir.file("config.ini"));
        CHECK(cfg.train.learning_rate == 0.3);
        CHECK(cfg.train.error_margin == 0.05);
        CHECK(cfg.train.initial_weight_range == 0.4);
        CHECK(cfg.train_frac == 0.60);
        CHECK(cfg.test_frac == 0.30);
        CHECK(cfg.target_window == 4);
        CHECK(cfg.target_horizon == 5);
        CHECK(cfg.ep_threshold == 0.99);
        REQUIRE(cfg.series.size() == 1);
        CHECK(cfg.series[0].sma_windows == std::vector<int>{2, 5});
        CHECK(cfg.series[0].lags == std::vector<int>{0, 15});
        CHECK(cfg.series[0].max_degree == 6);
        CHECK(cfg.series[0].r2_threshold == 0.99);
    }
    SUBCASE("unknown keys are rejected") {
        write(dir.file("bad.ini"), minimal + "[train]\nlerning_rate = 0.3\n");
        CHECK_THROWS_WITH_AS(load_config(dir.file("bad.ini")),
                             doctest::Contains("unknown train key"), Error);
    }
    SUBCASE("missing file is named") {
        write(dir.file("bad.ini"), "[series x]\nfile = missing.csv\nfrequency = weekly\n"
                                   "[target]\nseries = x\n");
        CHECK_THROWS_WITH_AS(load_config(dir.file("bad.ini")),
                             doctest::Contains("missing.csv"), Error);
    }
    SUBCASE("dangling target reference") {
        write(dir.file("bad.ini"), minimal + "[target]\nseries = fantasma\n");
        CHECK_THROWS_WITH_AS(load_config(dir.file("bad.ini")),
                             doctest::Contains("fantasma"), Error);
    }
    SUBCASE("dump/load round trip is exact") {
        std::string full = "[series precio]\n"
                           "file = precio.csv\n"
                           "frequency = weekly\n"
                           "units = $/b\n"
                           "sma = 2,5\n"
                           "lags = 0,7,15\n"
                           "r2_threshold = 0.975\n"
                           "[target]\n"
                           "series = precio\n"
                           "[train]\n"
                           "learning_rate = 0.25\n"
                           "max_epochs = 123\n"
                           "n_experts = 3\n"
                           "base_seed = 99\n"
                           "perturb_rounds = 4\n"
                           "[backtest]\n"
                           "cost_rate = 0.002\n"
                           "initial_capital = 25.5\n";
        write(dir.file("full.ini"), full);
        PipelineConfig cfg = load_config(dir.file("full.ini"));
        std::string dumped = dump_config(cfg);
        PipelineConfig again = parse_config_text(dumped, dir.path().string());
        CHECK(again == cfg);
        CHECK(dump_config(again) == dumped);
    }
    SUBCASE("relative paths resolve against the config directory") {
        PipelineConfig cfg = load_config(dir.file("config.ini"));
        CHECK(cfg.series[0].path == dir.file("precio.csv"));
    }
}
