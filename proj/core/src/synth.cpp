#include "bincast/synth.hpp"

#include <cmath>

#include "bincast/rng.hpp"

namespace bincast {

Panel synth_panel(const SynthSpec& spec, std::uint64_t seed) {
    if (spec.n_series <= 0) throw std::invalid_argument("synth_panel: n_series must be positive");
    if (spec.length <= 0) throw std::invalid_argument("synth_panel: length must be positive");
    if (spec.period <= 0) throw std::invalid_argument("synth_panel: period must be positive");

    const Timestamp start = parse_timestamp(spec.start);
    const double two_pi = 6.283185307179586476925286766559;

    std::vector<TimeSeries> series;
    series.reserve(static_cast<std::size_t>(spec.n_series));
    for (int i = 0; i < spec.n_series; ++i) {
        Rng rng(seed, static_cast<std::uint64_t>(i));

        double scale = spec.scale_value;
        if (spec.scale_kind == SynthSpec::ScaleKind::LogNormal) {
            scale = std::exp(spec.scale_log_sigma * rng.normal());
        }
        const long phase =
            spec.phase_jitter ? static_cast<long>(rng.uniform_index(spec.period)) : 0;

        TimeSeries s;
        s.item_id = spec.name + "_" + std::to_string(i);
        s.start = start;
        s.freq = spec.freq;
        s.values.resize(static_cast<std::size_t>(spec.length));
        for (int t = 0; t < spec.length; ++t) {
            double v = spec.level +
                       spec.amplitude * std::sin(two_pi * (t + phase) / spec.period);
            if (spec.noise_sigma > 0.0) v += spec.noise_sigma * rng.normal();
            if (spec.spike_prob > 0.0 && rng.uniform() < spec.spike_prob) v *= spec.spike_scale;
            s.values[static_cast<std::size_t>(t)] = scale * v;
        }
        series.push_back(std::move(s));
    }
    return Panel{std::move(series)};
}

}  // namespace bincast
