#pragma once

#include <string>

#include "bincast/timeseries.hpp"

namespace bincast {

// Loads a panel from a line-delimited JSON file (UTF-8, one record per
// line). Each record is {"start": <ISO timestamp>, "target": [numbers...]}
// with optional "item_id" and "freq" fields. Records without an item_id are
// assigned "series_<line index>". All records must agree on the frequency;
// when no record carries one, `default_freq` applies.
//
// Errors carry the offending line number: malformed JSON, non-finite
// targets, duplicate item_ids and mixed frequencies are all rejected.
//
// `horizon` > 0 additionally requires every series to be longer than the
// horizon, so that a backtest split at that horizon is possible.
Panel load_panel(const std::string& path, int horizon = 0,
                 Frequency default_freq = Frequency::Hourly);

// Writes the panel in the same format, one record per line with the
// normalized field order {"item_id", "start", "freq", "target"}.
void write_panel(const Panel& panel, const std::string& path);

}  // namespace bincast
