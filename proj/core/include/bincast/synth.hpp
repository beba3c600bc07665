#pragma once

#include <cstdint>
#include <string>

#include "bincast/timeseries.hpp"

namespace bincast {

// Parameters for synthetic panel generation. Each series is
//   z_t = s_i * (level + amplitude * sin(2*pi*(t + phase_i)/period)
//                + noise_sigma * eps_t) * spike_t
// where s_i is the per-series scale, phase_i an integer phase offset in
// [0, period) when phase_jitter is set, eps_t standard normal, and spike_t
// equals spike_scale with probability spike_prob (1 otherwise). Spikes make
// the pooled scaled values heavy-tailed even after per-series rescaling.
struct SynthSpec {
    int n_series = 1;
    int length = 100;
    int period = 24;
    double level = 1.0;
    double amplitude = 0.5;
    double noise_sigma = 0.0;

    // per-series scale distribution: fixed value, or log-normal exp(sigma*N)
    enum class ScaleKind { Fixed, LogNormal };
    ScaleKind scale_kind = ScaleKind::Fixed;
    double scale_value = 1.0;      // Fixed
    double scale_log_sigma = 1.0;  // LogNormal

    double spike_prob = 0.0;
    double spike_scale = 10.0;
    bool phase_jitter = false;

    std::string start = "2021-01-04T00:00";  // a Monday
    Frequency freq = Frequency::Hourly;
    std::string name = "synthetic";
};

// Reproducible: a given (spec, seed) always yields the same panel. Series i
// draws from an independent stream derived from (seed, i), so adding series
// does not reshuffle existing ones.
Panel synth_panel(const SynthSpec& spec, std::uint64_t seed);

}  // namespace bincast
