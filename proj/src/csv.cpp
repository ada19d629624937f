#include "oilcast/csv.hpp"

#include <fstream>
#include <sstream>

#include "oilcast/errors.hpp"
#include "oilcast/text.hpp"

namespace oilcast {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorKind::io, "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

TimeSeries parse_series_csv(std::string_view text, Frequency frequency,
                            const std::string& id, const std::string& units,
                            const std::string& origin) {
    auto fail = [&](std::size_t row, const std::string& why) {
        throw Error(ErrorKind::format, origin + " row " + std::to_string(row) + ": " + why);
    };

    if (text.substr(0, 3) == "\xEF\xBB\xBF") // UTF-8 BOM
        text.remove_prefix(3);

    std::vector<std::string_view> lines = split(text, '\n');
    while (!lines.empty() && trim(lines.back()).empty())
        lines.pop_back();
    if (lines.empty())
        fail(1, "empty file");
    if (trim(lines[0]) != "date,value")
        fail(1, "expected header 'date,value'");

    TimeSeries series;
    series.id = id;
    series.frequency = frequency;
    series.units = units;
    series.points.reserve(lines.size() - 1);

    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::size_t row = i + 1;
        std::string_view line = trim(lines[i]);
        if (line.empty())
            fail(row, "blank line inside data");
        std::vector<std::string_view> fields = split(line, ',');
        if (fields.size() != 2)
            fail(row, "expected 'date,value'");
        auto date = parse_iso(trim(fields[0]));
        if (!date)
            fail(row, "unparsable date '" + std::string(trim(fields[0])) + "'");
        auto value = parse_double(trim(fields[1]));
        if (!value)
            fail(row, "unparsable value '" + std::string(trim(fields[1])) + "'");
        if (!series.points.empty()) {
            long gap = days_between(series.points.back().date, *date);
            if (gap == 0)
                fail(row, "duplicate date " + to_iso(*date));
            if (gap < 0)
                fail(row, "dates out of order at " + to_iso(*date));
            if (!frequency_gap_ok(frequency, gap))
                fail(row, "gap of " + std::to_string(gap) + " days is inconsistent with " +
                              std::string(to_string(frequency)) + " frequency");
        }
        series.points.push_back(Observation{*date, *value});
    }
    series.validate();
    return series;
}

TimeSeries ingest_csv(const std::string& path, Frequency frequency,
                      const std::string& id, const std::string& units) {
    return parse_series_csv(read_file(path), frequency, id.empty() ? path : id, units,
                            path);
}

std::string series_to_csv(const TimeSeries& series) {
    std::string out = "date,value\n";
    for (const Observation& p : series.points)
        out += to_iso(p.date) + "," + format_double(p.value) + "\n";
    return out;
}

} // namespace oilcast
