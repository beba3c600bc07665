#include "bincast/timeseries.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <set>

namespace bincast {

namespace {

using namespace std::chrono;

year_month_day to_ymd(const Timestamp& ts) {
    return year{ts.year} / month{ts.month} / day{ts.day};
}

Timestamp from_ymd(const year_month_day& ymd, unsigned hour, unsigned minute) {
    return Timestamp{int(ymd.year()), unsigned(ymd.month()), unsigned(ymd.day()), hour, minute};
}

year_month_day add_months(year_month_day ymd, long n) {
    ymd += months{n};
    if (!ymd.ok()) ymd = ymd.year() / ymd.month() / last;  // clamp to month end
    return ymd;
}

}  // namespace

Frequency parse_frequency(const std::string& token) {
    std::string t;
    for (char c : token) t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (!t.empty() && t.front() == '1') t.erase(t.begin());  // "1H" -> "h"
    if (t == "h" || t == "hourly") return Frequency::Hourly;
    if (t == "d" || t == "daily") return Frequency::Daily;
    if (t == "w" || t == "weekly") return Frequency::Weekly;
    if (t == "m" || t == "monthly") return Frequency::Monthly;
    if (t == "q" || t == "quarterly") return Frequency::Quarterly;
    if (t == "y" || t == "a" || t == "yearly" || t == "annual") return Frequency::Yearly;
    throw std::invalid_argument("unknown frequency '" + token +
                                "' (expected one of H, D, W, M, Q, Y)");
}

std::string to_string(Frequency f) {
    switch (f) {
        case Frequency::Hourly: return "H";
        case Frequency::Daily: return "D";
        case Frequency::Weekly: return "W";
        case Frequency::Monthly: return "M";
        case Frequency::Quarterly: return "Q";
        case Frequency::Yearly: return "Y";
    }
    return "?";
}

Timestamp parse_timestamp(const std::string& text) {
    Timestamp ts;
    int y = 0;
    unsigned mo = 0, d = 0, h = 0, mi = 0, s = 0;
    char sep = 0;
    int n = std::sscanf(text.c_str(), "%d-%u-%u%c%u:%u:%u", &y, &mo, &d, &sep, &h, &mi, &s);
    if (n != 3 && n != 6 && n != 7) {
        throw std::invalid_argument("unparseable timestamp '" + text +
                                    "' (expected ISO-8601 without timezone)");
    }
    if (n >= 6 && sep != 'T' && sep != ' ') {
        throw std::invalid_argument("unparseable timestamp '" + text + "': bad date/time separator");
    }
    ts.year = y;
    ts.month = mo;
    ts.day = d;
    ts.hour = (n >= 6) ? h : 0;
    ts.minute = (n >= 6) ? mi : 0;
    if (!to_ymd(ts).ok() || ts.hour > 23 || ts.minute > 59) {
        throw std::invalid_argument("invalid calendar date in timestamp '" + text + "'");
    }
    return ts;
}

std::string format_timestamp(const Timestamp& ts) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02u:%02u", ts.year, ts.month, ts.day, ts.hour,
                  ts.minute);
    return buf;
}

Timestamp advance(const Timestamp& start, Frequency freq, long steps) {
    switch (freq) {
        case Frequency::Hourly: {
            long long total = static_cast<long long>(start.hour) + steps;
            long long day_shift = total >= 0 ? total / 24 : (total - 23) / 24;
            unsigned hour = static_cast<unsigned>(total - day_shift * 24);
            auto days_point = sys_days{to_ymd(start)} + days{day_shift};
            return from_ymd(year_month_day{days_point}, hour, start.minute);
        }
        case Frequency::Daily: {
            auto days_point = sys_days{to_ymd(start)} + days{steps};
            return from_ymd(year_month_day{days_point}, start.hour, start.minute);
        }
        case Frequency::Weekly: {
            auto days_point = sys_days{to_ymd(start)} + days{7 * steps};
            return from_ymd(year_month_day{days_point}, start.hour, start.minute);
        }
        case Frequency::Monthly:
            return from_ymd(add_months(to_ymd(start), steps), start.hour, start.minute);
        case Frequency::Quarterly:
            return from_ymd(add_months(to_ymd(start), 3 * steps), start.hour, start.minute);
        case Frequency::Yearly:
            return from_ymd(add_months(to_ymd(start), 12 * steps), start.hour, start.minute);
    }
    throw std::logic_error("unreachable frequency");
}

void validate_series(const TimeSeries& series) {
    if (series.values.empty()) {
        throw std::invalid_argument("series '" + series.item_id + "' is empty");
    }
    for (std::size_t t = 0; t < series.values.size(); ++t) {
        if (!std::isfinite(series.values[t])) {
            throw std::invalid_argument("series '" + series.item_id +
                                        "' has non-finite value at index " + std::to_string(t));
        }
    }
}

Panel::Panel(std::vector<TimeSeries> series) : series_(std::move(series)) {
    std::set<std::string> seen;
    for (const auto& s : series_) {
        validate_series(s);
        if (!seen.insert(s.item_id).second) {
            throw std::invalid_argument("duplicate item_id '" + s.item_id + "' in panel");
        }
        if (s.freq != series_.front().freq) {
            throw std::invalid_argument("mixed frequencies in panel: series '" + s.item_id +
                                        "' has " + to_string(s.freq) + ", expected " +
                                        to_string(series_.front().freq));
        }
    }
}

Frequency Panel::freq() const {
    if (series_.empty()) throw std::logic_error("freq() on empty panel");
    return series_.front().freq;
}

const TimeSeries* Panel::find(const std::string& item_id) const {
    for (const auto& s : series_) {
        if (s.item_id == item_id) return &s;
    }
    return nullptr;
}

std::size_t covariate_dim(Frequency freq) {
    switch (freq) {
        case Frequency::Hourly: return 2;
        case Frequency::Daily: return 2;
        case Frequency::Weekly: return 1;
        case Frequency::Monthly: return 1;
        case Frequency::Quarterly: return 1;
        case Frequency::Yearly: return 1;
    }
    return 0;
}

CovariateMatrix make_time_features(const Timestamp& start, Frequency freq, std::size_t length) {
    if (length == 0) throw std::invalid_argument("make_time_features: length must be >= 1");
    CovariateMatrix cov;
    cov.rows.reserve(length);
    for (std::size_t t = 0; t < length; ++t) {
        const Timestamp ts = advance(start, freq, static_cast<long>(t));
        const auto ymd = to_ymd(ts);
        const auto wd = weekday{sys_days{ymd}};
        const unsigned dow = wd.iso_encoding() - 1;  // Monday = 0 .. Sunday = 6
        std::vector<double> row;
        switch (freq) {
            case Frequency::Hourly:
                row = {ts.hour / 23.0, dow / 6.0};
                break;
            case Frequency::Daily:
                row = {dow / 6.0, (ts.day - 1) / 30.0};
                break;
            case Frequency::Weekly: {
                const auto jan1 = sys_days{year{ts.year} / 1 / 1};
                const unsigned doy =
                    static_cast<unsigned>((sys_days{ymd} - jan1).count());  // 0-based
                row = {(doy / 7) / 52.0};
                break;
            }
            case Frequency::Monthly:
                row = {(ts.month - 1) / 11.0};
                break;
            case Frequency::Quarterly:
                row = {((ts.month - 1) / 3) / 3.0};
                break;
            case Frequency::Yearly:
                row = {0.0};
                break;
        }
        cov.rows.push_back(std::move(row));
    }
    return cov;
}

BacktestSplit split_backtest(const Panel& panel, int horizon) {
    if (horizon <= 0) throw std::invalid_argument("split_backtest: horizon must be positive");
    std::vector<TimeSeries> train;
    train.reserve(panel.size());
    for (const auto& s : panel.series()) {
        if (s.length() <= static_cast<std::size_t>(horizon)) {
            throw std::invalid_argument("split_backtest: series '" + s.item_id + "' has length " +
                                        std::to_string(s.length()) +
                                        " <= horizon " + std::to_string(horizon));
        }
        TimeSeries prefix = s;
        prefix.values.resize(s.length() - static_cast<std::size_t>(horizon));
        train.push_back(std::move(prefix));
    }
    return BacktestSplit{Panel{std::move(train)}, panel, horizon};
}

}  // namespace bincast
