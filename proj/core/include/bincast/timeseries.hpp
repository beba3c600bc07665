#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace bincast {

enum class Frequency { Hourly, Daily, Weekly, Monthly, Quarterly, Yearly };

Frequency parse_frequency(const std::string& token);
std::string to_string(Frequency f);

// Calendar timestamp without timezone, minute resolution.
struct Timestamp {
    int year = 1970;
    unsigned month = 1;  // 1..12
    unsigned day = 1;    // 1..31
    unsigned hour = 0;   // 0..23
    unsigned minute = 0; // 0..59

    bool operator==(const Timestamp&) const = default;
};

// Accepts ISO-8601 without timezone: "2020-01-01", "2020-01-01T00:00",
// "2020-01-01 00:00:00". Throws std::invalid_argument on anything else.
Timestamp parse_timestamp(const std::string& text);
std::string format_timestamp(const Timestamp& ts);

// Timestamp advanced by `steps` periods of `freq`. Month-based frequencies
// clamp to the last day of the target month (Jan 31 + 1 month -> Feb 29/28).
Timestamp advance(const Timestamp& start, Frequency freq, long steps);

// A univariate series. Values are validated finite at construction time.
struct TimeSeries {
    std::string item_id;
    Timestamp start;
    Frequency freq = Frequency::Hourly;
    std::vector<double> values;

    std::size_t length() const { return values.size(); }
};

// Validates the TimeSeries invariants (finite values, length >= 1);
// throws std::invalid_argument naming the series on violation.
void validate_series(const TimeSeries& series);

// Ordered collection of series sharing one sampling frequency.
class Panel {
public:
    Panel() = default;
    explicit Panel(std::vector<TimeSeries> series);

    const std::vector<TimeSeries>& series() const { return series_; }
    std::size_t size() const { return series_.size(); }
    bool empty() const { return series_.empty(); }
    Frequency freq() const;

    const TimeSeries& at(std::size_t i) const { return series_.at(i); }
    const TimeSeries* find(const std::string& item_id) const;

private:
    std::vector<TimeSeries> series_;
};

// Per-time-step feature rows, all entries in [0, 1]. Row 0 is aligned with
// the series start.
struct CovariateMatrix {
    std::vector<std::vector<double>> rows;
    std::size_t dim() const { return rows.empty() ? 0 : rows.front().size(); }
    std::size_t length() const { return rows.size(); }
};

struct BacktestSplit {
    Panel train;  // each series truncated by `horizon`
    Panel test;   // the full series
    int horizon = 0;
};

// Deterministic date-dependent dummy features for `length` steps starting
// at `start`. The feature set is fixed per frequency:
//   hourly    -> {hour-of-day/23, day-of-week/6}
//   daily     -> {day-of-week/6, (day-of-month-1)/30}
//   weekly    -> {week-of-year/52}
//   monthly   -> {(month-1)/11}
//   quarterly -> {(quarter-1)/3}
//   yearly    -> {0}
CovariateMatrix make_time_features(const Timestamp& start, Frequency freq, std::size_t length);

std::size_t covariate_dim(Frequency freq);

// Backtest split at horizon tau: train series are exact prefixes of length
// T - tau; the last tau values of each test series are the evaluation
// target. Throws if any series has length <= tau or tau <= 0.
BacktestSplit split_backtest(const Panel& panel, int horizon);

}  // namespace bincast
