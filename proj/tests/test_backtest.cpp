#include <cmath>
#include <doctest.h>

#include "oilcast/backtest.hpp"
#include "oilcast/errors.hpp"
#include "oilcast/rng.hpp"

using namespace oilcast;

namespace {

// Literal transcription of the documented recurrence, kept independent of
// the implementation.
std::vector<double> equity_oracle(const std::vector<int>& s, const std::vector<double>& r,
                                  double initial, double cost) {
    std::vector<double> equity = {initial};
    int prev = 0;
    for (std::size_t t = 0; t < s.size(); ++t) {
        double e = equity.back();
        e = e * (1.0 + s[t] * r[t]);
        if (s[t] != prev)
            e = e * (1.0 - cost);
        equity.push_back(e);
        prev = s[t];
    }
    return equity;
}

// k weeks of +a and m weeks of -b, all held long, chosen so the strategy
// compounds to `strategy_final` while the clairvoyant benchmark compounds to
// `perfect_final` (solved in closed form from the two products).
struct TwoRateCase {
    std::vector<int> signals;
    std::vector<double> returns;
};

TwoRateCase make_two_rate_case(int k, int m, double initial, double strategy_final,
                               double perfect_final) {
    double ratio = perfect_final / strategy_final; // ((1+b)/(1-b))^m
    double q = std::pow(ratio, 1.0 / m);
    double b = (q - 1.0) / (q + 1.0);
    double gross = strategy_final / initial;       // (1+a)^k (1-b)^m
    double a = std::pow(gross / std::pow(1.0 - b, m), 1.0 / k) - 1.0;
    TwoRateCase tc;
    for (int i = 0; i < k; ++i) {
        tc.signals.push_back(1);
        tc.returns.push_back(a);
    }
    for (int i = 0; i < m; ++i) {
        tc.signals.push_back(1);
        tc.returns.push_back(-b);
    }
    return tc;
}

} // namespace

TEST_CASE("signals from forecast returns") {
    std::vector<double> f = {0.02, -0.01, 0.0};
    auto s = signals(f);
    CHECK(s == std::vector<int>{1, -1, 0});

    std::vector<double> all_pos = {0.1, 0.4, 0.2};
    for (int v : signals(all_pos))
        CHECK(v == 1);

    SplitMix64 rng(5);
    std::vector<double> random_f;
    for (int i = 0; i < 50; ++i)
        random_f.push_back(rng.gaussian());
    auto rs = signals(random_f);
    for (std::size_t i = 0; i < random_f.size(); ++i) {
        int oracle = random_f[i] > 0 ? 1 : (random_f[i] < 0 ? -1 : 0);
        CHECK(rs[i] == oracle);
    }
}

TEST_CASE("equity curve basics") {
    SUBCASE("flat signals, no cost: constant") {
        std::vector<int> s(10, 0);
        std::vector<double> r(10, 0.05);
        EquityCurve c = equity_curve(s, r, 10.0, 0.0);
        for (double e : c.equity)
            CHECK(e == 10.0);
    }
    SUBCASE("one winning long week") {
        EquityCurve c = equity_curve(std::vector<int>{1}, std::vector<double>{0.10},
                                     10.0, 0.0);
        REQUIRE(c.equity.size() == 2);
        CHECK(c.equity[1] == doctest::Approx(11.0).epsilon(1e-15));
        CHECK(c.period_returns[0] == doctest::Approx(0.10).epsilon(1e-15));
    }
    SUBCASE("three weeks with sign changes and costs, hand-computed") {
        std::vector<int> s = {1, -1, -1};
        std::vector<double> r = {0.04, -0.03, 0.02};
        const double cost = 0.001;
        EquityCurve c = equity_curve(s, r, 10.0, cost);
        double e0 = 10.0;
        double e1 = e0 * (1.0 + 0.04) * (1.0 - cost);        // entered long
        double e2 = e1 * (1.0 - (-0.03)) * (1.0 - cost);     // flipped short
        double e3 = e2 * (1.0 - 0.02);                       // stayed short
        CHECK(c.equity[1] == doctest::Approx(e1).epsilon(1e-15));
        CHECK(c.equity[2] == doctest::Approx(e2).epsilon(1e-15));
        CHECK(c.equity[3] == doctest::Approx(e3).epsilon(1e-15));
    }
    SUBCASE("bankruptcy is an error with the week") {
        std::vector<int> s = {1, 1};
        std::vector<double> r = {0.1, -1.0};
        CHECK_THROWS_AS(equity_curve(s, r, 10.0, 0.0), Error);
        try {
            equity_curve(s, r, 10.0, 0.0);
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::bankruptcy);
            CHECK(std::string(e.what()).find("week 2") != std::string::npos);
        }
    }
    SUBCASE("bad inputs") {
        std::vector<int> s = {1};
        std::vector<double> r = {0.1, 0.2};
        CHECK_THROWS_AS(equity_curve(s, r, 10.0, 0.0), Error);
        CHECK_THROWS_AS(equity_curve(s, std::vector<double>{0.1}, 0.0, 0.0), Error);
        CHECK_THROWS_AS(equity_curve(s, std::vector<double>{0.1}, 10.0, 1.0), Error);
    }
}

TEST_CASE("equity curve equals the brute-force recurrence on random cases") {
    SplitMix64 rng(777);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t n = 1 + rng.next() % 60;
        std::vector<int> s;
        std::vector<double> r;
        for (std::size_t i = 0; i < n; ++i) {
            s.push_back(static_cast<int>(rng.next() % 3) - 1);
            r.push_back(rng.uniform(-0.08, 0.09));
        }
        double cost = rng.uniform(0.0, 0.01);
        double initial = rng.uniform(1.0, 100.0);
        EquityCurve c = equity_curve(s, r, initial, cost);
        auto oracle = equity_oracle(s, r, initial, cost);
        REQUIRE(c.equity.size() == oracle.size());
        for (std::size_t i = 0; i < oracle.size(); ++i)
            CHECK(std::abs(c.equity[i] - oracle[i]) <= 1e-12 * std::abs(oracle[i]));
    }
}

TEST_CASE("perfect equity") {
    SUBCASE("worked example") {
        EquityCurve p = perfect_equity(std::vector<double>{0.1, -0.1}, 10.0);
        REQUIRE(p.equity.size() == 3);
        CHECK(p.equity[0] == 10.0);
        CHECK(p.equity[1] == doctest::Approx(11.0).epsilon(1e-15));
        CHECK(p.equity[2] == doctest::Approx(12.1).epsilon(1e-15));
        CHECK(p.positions == std::vector<int>{1, -1});
    }
    SUBCASE("zero returns stay constant") {
        EquityCurve p = perfect_equity(std::vector<double>(8, 0.0), 5.0);
        for (double e : p.equity)
            CHECK(e == 5.0);
    }
    SUBCASE("dominates any costless strategy; ties clairvoyant signals") {
        SplitMix64 rng(31);
        for (int trial = 0; trial < 200; ++trial) {
            std::size_t n = 1 + rng.next() % 40;
            std::vector<double> r;
            std::vector<int> s;
            for (std::size_t i = 0; i < n; ++i) {
                r.push_back(rng.uniform(-0.09, 0.09));
                s.push_back(static_cast<int>(rng.next() % 3) - 1);
            }
            EquityCurve strat = equity_curve(s, r, 10.0, 0.0);
            EquityCurve perf = perfect_equity(r, 10.0);
            CHECK(perf.final_value() >= strat.final_value() - 1e-12);

            std::vector<int> clairvoyant;
            for (double v : r)
                clairvoyant.push_back(v > 0 ? 1 : (v < 0 ? -1 : 0));
            EquityCurve best = equity_curve(clairvoyant, r, 10.0, 0.0);
            for (std::size_t i = 0; i < best.equity.size(); ++i)
                CHECK(best.equity[i] == perf.equity[i]); // identical arithmetic
        }
    }
}

TEST_CASE("metrics reproduce the reference results") {
    // 96 weeks, 66 hits / 30 misses, 10.00 -> 62.70 against a perfect 96.26.
    TwoRateCase tc = make_two_rate_case(66, 30, 10.0, 62.70, 96.26);
    EquityCurve curve = equity_curve(tc.signals, tc.returns, 10.0, 0.0);
    EquityCurve perfect = perfect_equity(tc.returns, 10.0);
    BacktestReport report = metrics(curve, perfect, 52.0);

    CHECK(report.observations == 96);
    CHECK(report.hits == 66);
    CHECK(report.misses == 30);
    CHECK(std::abs(report.hit_rate - 0.69) <= 0.005);            // prints as 69%
    CHECK(report.final_capital == doctest::Approx(62.70).epsilon(1e-9));
    CHECK(report.perfect_equity_final == doctest::Approx(96.26).epsilon(1e-9));
    CHECK(std::abs(report.annualized_return - 1.70) <= 0.01);    // 170% a year
    CHECK(std::abs(report.equity_over_perfect - 0.65) <= 0.005); // 65%
    CHECK(report.mean_negative_volatility < 0.0);
}

TEST_CASE("metrics details") {
    SUBCASE("flat weeks are observations but not hits or misses") {
        std::vector<int> s = {1, 0, -1, 0};
        std::vector<double> r = {0.02, 0.05, 0.03, -0.01};
        EquityCurve c = equity_curve(s, r, 10.0, 0.0);
        EquityCurve p = perfect_equity(r, 10.0);
        BacktestReport rep = metrics(c, p);
        CHECK(rep.observations == 4);
        CHECK(rep.hits == 1);   // week 1 long on +2%
        CHECK(rep.misses == 1); // week 3 short on +3%
        CHECK(rep.hit_rate == doctest::Approx(0.5));
    }
    SUBCASE("max drawdown is the worst single-period decline") {
        std::vector<int> s = {1, 1, 1, 1};
        std::vector<double> r = {0.10, -0.04, -0.02, 0.05};
        EquityCurve c = equity_curve(s, r, 10.0, 0.0);
        BacktestReport rep = metrics(c, perfect_equity(r, 10.0));
        CHECK(rep.max_drawdown == doctest::Approx(0.04).epsilon(1e-12));
        // peak-to-trough spans both losing weeks
        CHECK(rep.peak_to_trough_drawdown ==
              doctest::Approx(1.0 - 0.96 * 0.98).epsilon(1e-12));
    }
    SUBCASE("drawdown is zero iff equity never falls") {
        std::vector<int> s = {1, 1, 1};
        std::vector<double> up = {0.01, 0.0, 0.02};
        BacktestReport rep =
            metrics(equity_curve(s, up, 10.0, 0.0), perfect_equity(up, 10.0));
        CHECK(rep.max_drawdown == 0.0);
    }
    SUBCASE("empty curve is an input error") {
        EquityCurve c;
        c.equity = {10.0};
        CHECK_THROWS_AS(metrics(c, c), Error);
    }
}

TEST_CASE("annualized return is path-independent") {
    // splitting one week's return into two compounding halves (with a zero
    // filler keeping T fixed) leaves the annualized figure unchanged
    std::vector<int> s = {1, 1, 1, 1};
    std::vector<double> r1 = {0.21, 0.0, 0.03, 0.01};
    double combined = std::sqrt(1.21) - 1.0;
    std::vector<double> r2 = {combined, combined, 0.03, 0.01};
    BacktestReport a = metrics(equity_curve(s, r1, 10.0, 0.0), perfect_equity(r1, 10.0));
    BacktestReport b = metrics(equity_curve(s, r2, 10.0, 0.0), perfect_equity(r2, 10.0));
    CHECK(a.annualized_return == doctest::Approx(b.annualized_return).epsilon(1e-12));

    // equivalently, doubling the period count while doubling weeks_per_year
    std::vector<int> s2(8, 1);
    std::vector<double> halves;
    for (double v : r1) {
        double half = std::sqrt(1.0 + v) - 1.0;
        halves.push_back(half);
        halves.push_back(half);
    }
    BacktestReport c =
        metrics(equity_curve(s2, halves, 10.0, 0.0), perfect_equity(halves, 10.0), 104.0);
    CHECK(c.annualized_return == doctest::Approx(a.annualized_return).epsilon(1e-9));
}

TEST_CASE("equity is invariant under inserting idle weeks") {
    std::vector<int> s = {1, -1, -1};
    std::vector<double> r = {0.05, -0.02, 0.01};
    EquityCurve base = equity_curve(s, r, 10.0, 0.002);

    std::vector<int> s2 = {1, 1, -1, -1, -1};
    std::vector<double> r2 = {0.05, 0.0, -0.02, 0.01, 0.0};
    EquityCurve padded = equity_curve(s2, r2, 10.0, 0.002);
    CHECK(padded.final_value() == doctest::Approx(base.final_value()).epsilon(1e-15));
}

TEST_CASE("flipping signals mirrors period factors when costless") {
    SplitMix64 rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        std::size_t n = 1 + rng.next() % 30;
        std::vector<int> s;
        std::vector<double> r;
        for (std::size_t i = 0; i < n; ++i) {
            s.push_back(static_cast<int>(rng.next() % 3) - 1);
            r.push_back(rng.uniform(-0.08, 0.08));
        }
        EquityCurve plain = equity_curve(s, r, 10.0, 0.0);
        std::vector<int> flipped;
        for (int v : s)
            flipped.push_back(-v);
        EquityCurve mirror = equity_curve(flipped, r, 10.0, 0.0);
        for (std::size_t t = 0; t < n; ++t) {
            double lhs = 1.0 + mirror.period_returns[t];
            double rhs = 1.0 - s[t] * r[t];
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
        }
    }
}
