#include "bincast/ecdf.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bincast {

EmpiricalCdf::EmpiricalCdf(std::span<const double> sample)
    : sorted_(sample.begin(), sample.end()) {
    if (sorted_.empty()) throw std::invalid_argument("EmpiricalCdf: empty fit sample");
    std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::pit(double x) const {
    const auto n = static_cast<double>(sorted_.size());
    const auto count = std::upper_bound(sorted_.begin(), sorted_.end(), x) - sorted_.begin();
    if (count == 0) return 1.0 / (2.0 * n);
    return static_cast<double>(count) / n;
}

double EmpiricalCdf::pit_inverse(double u) const {
    if (!(u > 0.0 && u <= 1.0)) {
        throw std::invalid_argument("pit_inverse: u must be in (0, 1], got " + std::to_string(u));
    }
    const auto n = sorted_.size();
    auto rank = static_cast<std::size_t>(std::ceil(u * static_cast<double>(n)));
    rank = std::clamp<std::size_t>(rank, 1, n);
    return sorted_[rank - 1];
}

}  // namespace bincast
