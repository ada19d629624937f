#pragma once

#include <span>
#include <string>
#include <vector>

#include "oilcast/dates.hpp"

namespace oilcast {

enum class Frequency { weekly, quarterly, annual };

const char* to_string(Frequency f);

// Whether a day gap between consecutive observations is consistent with the
// frequency (7 +/- 3 days weekly, one quarter, one year).
bool frequency_gap_ok(Frequency f, long days);

struct Observation {
    Date date;
    double value = 0.0;
};

// A dated, single-frequency numeric series. Dates must be strictly
// increasing, spaced consistently with the declared frequency (7 +/- 3 days
// for weekly, one quarter or one year otherwise), and every value finite.
struct TimeSeries {
    std::string id;
    Frequency frequency = Frequency::weekly;
    std::string units; // carried as metadata, e.g. "$/b", "millones Bs"
    std::vector<Observation> points;

    void validate() const; // throws Error(input) on any broken invariant

    Date first_date() const { return points.front().date; }
    Date last_date() const { return points.back().date; }
};

struct FitReport {
    int degree = 0;
    double r_squared = 0.0;
    std::vector<double> coefficients; // ascending power, in the scaled time basis
};

// Weekly grid: first = start, then exact 7-day steps, last <= end.
std::vector<Date> weekly_calendar(Date start, Date end);

// The date range a series can interpolate over: its observations extended to
// whole periods (a 2005 annual value covers through 2005-12-31).
Date coverage_start(const TimeSeries& series);
Date coverage_end(const TimeSeries& series);

struct InterpolationResult {
    TimeSeries weekly;
    FitReport fit;
};

// Homogenize a series onto a weekly calendar. Fits least-squares polynomials
// of degree 1..max_degree over (scaled week index, value), picks the smallest
// degree whose R^2 meets r2_threshold (else the best R^2 seen), and evaluates
// the winner at every calendar date. Quarterly and annual observations are
// anchored to the first calendar week of their period, so a yearly value
// enters at week 1 of its year. Where an anchored observation lands exactly
// on a calendar date the observed value is passed through unchanged, so a
// weekly input reproduces itself on matching dates.
InterpolationResult interpolate_to_weekly(const TimeSeries& series,
                                          std::span<const Date> calendar,
                                          int max_degree = 6,
                                          double r2_threshold = 0.99);

} // namespace oilcast
