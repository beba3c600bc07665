#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace bincast {

// Invertible affine map z' = (z - b) / a with a > 0.
struct AffineScale {
    double a = 1.0;
    double b = 0.0;

    double apply(double z) const { return (z - b) / a; }
    double invert(double z_scaled) const { return z_scaled * a + b; }
};

inline constexpr double kDegenerateScaleEps = 1e-12;

// Mean scaling: a = mean(|z|), b = 0. An (almost) all-zero series falls
// back to a = 1 so it passes through unchanged.
inline AffineScale fit_mean_scale(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("fit_mean_scale: empty sequence");
    double sum_abs = 0.0;
    for (double v : values) sum_abs += std::abs(v);
    double a = sum_abs / static_cast<double>(values.size());
    if (a <= kDegenerateScaleEps) a = 1.0;
    return AffineScale{a, 0.0};
}

inline std::vector<double> apply_affine(const AffineScale& scale, std::span<const double> values) {
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = scale.apply(values[i]);
    return out;
}

inline std::vector<double> invert_affine(const AffineScale& scale, std::span<const double> values) {
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = scale.invert(values[i]);
    return out;
}

}  // namespace bincast
