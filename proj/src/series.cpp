#include "oilcast/series.hpp"

#include <cassert>
#include <cmath>
#include <unordered_map>

#include "oilcast/errors.hpp"
#include "oilcast/polyfit.hpp"

namespace oilcast {

bool frequency_gap_ok(Frequency f, long days) {
    switch (f) {
    case Frequency::weekly: return days >= 4 && days <= 10; // 7 +/- 3
    case Frequency::quarterly: return days >= 85 && days <= 97;
    case Frequency::annual: return days >= 360 && days <= 371;
    }
    return false;
}

namespace {

Date period_start(Frequency f, Date d) {
    switch (f) {
    case Frequency::weekly: return d;
    case Frequency::quarterly: {
        unsigned m = unsigned(d.month());
        unsigned qm = ((m - 1) / 3) * 3 + 1;
        return make_date(int(d.year()), qm, 1);
    }
    case Frequency::annual: return make_date(int(d.year()), 1, 1);
    }
    return d;
}

Date next_period_start(Frequency f, Date d) {
    Date start = period_start(f, d);
    switch (f) {
    case Frequency::weekly: return add_days(start, 7);
    case Frequency::quarterly: {
        unsigned m = unsigned(start.month());
        int y = int(start.year());
        if (m >= 10)
            return make_date(y + 1, 1, 1);
        return make_date(y, m + 3, 1);
    }
    case Frequency::annual: return make_date(int(d.year()) + 1, 1, 1);
    }
    return start;
}

} // namespace

const char* to_string(Frequency f) {
    switch (f) {
    case Frequency::weekly: return "weekly";
    case Frequency::quarterly: return "quarterly";
    case Frequency::annual: return "annual";
    }
    return "unknown";
}

void TimeSeries::validate() const {
    if (points.empty())
        throw Error(ErrorKind::input, "series '" + id + "' has no points");
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!std::isfinite(points[i].value))
            throw Error(ErrorKind::input, "series '" + id + "' has a non-finite value at " +
                                              to_iso(points[i].date));
        if (i == 0)
            continue;
        long gap = days_between(points[i - 1].date, points[i].date);
        if (gap <= 0)
            throw Error(ErrorKind::input, "series '" + id + "' dates not strictly increasing at " +
                                              to_iso(points[i].date));
        if (!frequency_gap_ok(frequency, gap))
            throw Error(ErrorKind::input,
                        "series '" + id + "' gap of " + std::to_string(gap) +
                            " days before " + to_iso(points[i].date) +
                            " is inconsistent with " + to_string(frequency) +
                            " frequency");
    }
}

Date coverage_start(const TimeSeries& series) {
    if (series.points.empty())
        throw Error(ErrorKind::input, "series '" + series.id + "' has no points");
    return period_start(series.frequency, series.first_date());
}

Date coverage_end(const TimeSeries& series) {
    if (series.points.empty())
        throw Error(ErrorKind::input, "series '" + series.id + "' has no points");
    return add_days(next_period_start(series.frequency, series.last_date()), -1);
}

std::vector<Date> weekly_calendar(Date start, Date end) {
    if (day_number(start) > day_number(end))
        throw Error(ErrorKind::input, "calendar start " + to_iso(start) +
                                          " is after end " + to_iso(end));
    std::vector<Date> dates;
    long first = day_number(start);
    long last = day_number(end);
    dates.reserve(static_cast<std::size_t>((last - first) / 7) + 1);
    for (long d = first; d <= last; d += 7)
        dates.push_back(date_from_day_number(d));
    return dates;
}

InterpolationResult interpolate_to_weekly(const TimeSeries& series,
                                          std::span<const Date> calendar,
                                          int max_degree, double r2_threshold) {
    if (series.points.size() < 2)
        throw Error(ErrorKind::input, "series '" + series.id + "' needs at least 2 points");
    if (calendar.empty())
        throw Error(ErrorKind::input, "empty calendar");
    if (max_degree < 1 || max_degree > 8)
        throw Error(ErrorKind::input, "max_degree must be in [1, 8]");
    series.validate();

    // Coverage: the series' periods must bracket the whole calendar.
    Date cover_start = coverage_start(series);
    Date cover_end = coverage_end(series);
    if (day_number(cover_start) > day_number(calendar.front()) ||
        day_number(cover_end) < day_number(calendar.back()))
        throw Error(ErrorKind::input,
                    "series '" + series.id + "' spans " + to_iso(cover_start) + ".." +
                        to_iso(cover_end) + " which does not cover the calendar " +
                        to_iso(calendar.front()) + ".." + to_iso(calendar.back()));

    const long front_day = day_number(calendar.front());
    const std::size_t n_weeks = calendar.size();

    // Week coordinate of each observation. Quarterly/annual values are
    // anchored to the first grid week of their period (annual data enters at
    // week 1 of its year); weekly observations keep their own, possibly
    // off-grid, coordinate.
    std::vector<double> coords(series.points.size());
    std::vector<long> anchor_days(series.points.size());
    for (std::size_t i = 0; i < series.points.size(); ++i) {
        long obs_day;
        if (series.frequency == Frequency::weekly) {
            obs_day = day_number(series.points[i].date);
        } else {
            long start_day = day_number(period_start(series.frequency, series.points[i].date));
            long offset = start_day - front_day;
            long k = offset >= 0 ? (offset + 6) / 7 : -((-offset) / 7);
            obs_day = front_day + 7 * k;
        }
        anchor_days[i] = obs_day;
        coords[i] = static_cast<double>(obs_day - front_day) / 7.0;
    }

    // Center and scale the week index to [-1, 1] over the calendar span so the
    // normal equations stay well conditioned at high degree.
    const double mid = static_cast<double>(n_weeks - 1) / 2.0;
    const double half_span = std::max(static_cast<double>(n_weeks - 1) / 2.0, 1.0);
    std::vector<double> u(coords.size());
    for (std::size_t i = 0; i < coords.size(); ++i)
        u[i] = (coords[i] - mid) / half_span;
    std::vector<double> values(series.points.size());
    for (std::size_t i = 0; i < series.points.size(); ++i)
        values[i] = series.points[i].value;

    // Degree search: smallest degree reaching the R^2 threshold, else the
    // best R^2 seen. R^2 is non-decreasing in degree on the same data; the
    // assert guards the solver against numerically losing that.
    PolyFitResult best;
    int best_degree = 0;
    bool have_fit = false;
    [[maybe_unused]] double prev_r2 = -1.0;
    for (int degree = 1; degree <= max_degree; ++degree) {
        if (series.points.size() < static_cast<std::size_t>(degree) + 1)
            break;
        PolyFitResult fit = fit_polynomial(u, values, degree);
        assert(fit.r_squared >= prev_r2 - 1e-7);
        prev_r2 = fit.r_squared;
        if (!have_fit || fit.r_squared > best.r_squared) {
            best = fit;
            best_degree = degree;
            have_fit = true;
        }
        if (fit.r_squared >= r2_threshold)
            break;
    }
    if (!have_fit)
        throw Error(ErrorKind::fit, "series '" + series.id +
                                        "' has too few points for any candidate degree");

    // Exact-date observations override the polynomial: observed values are
    // authoritative wherever they already sit on the weekly grid.
    std::unordered_map<long, double> exact;
    for (std::size_t i = 0; i < anchor_days.size(); ++i)
        exact[anchor_days[i]] = values[i];

    InterpolationResult result;
    result.fit = FitReport{best_degree, best.r_squared, best.coefficients};
    result.weekly.id = series.id;
    result.weekly.frequency = Frequency::weekly;
    result.weekly.units = series.units;
    result.weekly.points.resize(n_weeks);
    for (std::size_t t = 0; t < n_weeks; ++t) {
        long day = front_day + 7 * static_cast<long>(t);
        double value;
        if (auto it = exact.find(day); it != exact.end()) {
            value = it->second;
        } else {
            double ut = (static_cast<double>(t) - mid) / half_span;
            value = eval_polynomial(best.coefficients, ut);
        }
        if (!std::isfinite(value))
            throw Error(ErrorKind::numeric, "series '" + series.id +
                                                "' interpolates to a non-finite value at " +
                                                to_iso(calendar[t]));
        result.weekly.points[t] = Observation{calendar[t], value};
    }
    return result;
}

} // namespace oilcast
