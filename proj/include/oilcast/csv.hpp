#pragma once

#include <string>

#include "oilcast/series.hpp"

namespace oilcast {

// Read a "date,value" CSV (ISO dates, decimal point, UTF-8, LF or CRLF) into
// a validated TimeSeries. Parse and consistency errors cite the 1-based row.
TimeSeries ingest_csv(const std::string& path, Frequency frequency,
                      const std::string& id = "", const std::string& units = "");

// Same parser over in-memory text; `origin` names the source in errors.
TimeSeries parse_series_csv(std::string_view text, Frequency frequency,
                            const std::string& id, const std::string& units,
                            const std::string& origin);

std::string series_to_csv(const TimeSeries& series);

} // namespace oilcast
