#include "bincast/panel_io.hpp"

#include <cmath>
#include <fstream>
#include <optional>

#include <json.hpp>

namespace bincast {

using nlohmann::json;

Panel load_panel(const std::string& path, int horizon, Frequency default_freq) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open panel file '" + path + "'");

    std::vector<TimeSeries> series;
    std::optional<Frequency> freq;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json rec;
        try {
            rec = json::parse(line);
        } catch (const json::parse_error& e) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": malformed JSON record: " + e.what());
        }
        if (!rec.is_object() || !rec.contains("start") || !rec.contains("target")) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": record must be an object with 'start' and 'target'");
        }

        TimeSeries s;
        s.item_id = rec.contains("item_id") ? rec.at("item_id").get<std::string>()
                                            : "series_" + std::to_string(series.size());
        try {
            s.start = parse_timestamp(rec.at("start").get<std::string>());
        } catch (const std::exception& e) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + e.what());
        }

        if (rec.contains("freq")) {
            Frequency f = parse_frequency(rec.at("freq").get<std::string>());
            if (freq && *freq != f) {
                throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                         ": mixed frequencies in panel file");
            }
            freq = f;
        }

        const auto& target = rec.at("target");
        if (!target.is_array() || target.empty()) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": 'target' must be a non-empty array");
        }
        s.values.reserve(target.size());
        for (const auto& v : target) {
            if (!v.is_number()) {
                throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                         ": non-numeric entry in 'target' (series '" + s.item_id +
                                         "')");
            }
            const double x = v.get<double>();
            if (!std::isfinite(x)) {
                throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                         ": non-finite value in 'target' (series '" + s.item_id +
                                         "')");
            }
            s.values.push_back(x);
        }
        series.push_back(std::move(s));
    }

    const Frequency f = freq.value_or(default_freq);
    for (auto& s : series) s.freq = f;

    Panel panel{std::move(series)};  // validates uniqueness / finiteness again

    if (horizon > 0) {
        for (const auto& s : panel.series()) {
            if (s.length() <= static_cast<std::size_t>(horizon)) {
                throw std::runtime_error("panel file '" + path + "': series '" + s.item_id +
                                         "' has length " + std::to_string(s.length()) +
                                         " <= horizon " + std::to_string(horizon));
            }
        }
    }
    return panel;
}

void write_panel(const Panel& panel, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    for (const auto& s : panel.series()) {
        json rec;
        rec["item_id"] = s.item_id;
        rec["start"] = format_timestamp(s.start);
        rec["freq"] = to_string(s.freq);
        rec["target"] = s.values;
        out << rec.dump() << '\n';
    }
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace bincast
