#pragma once

#include <span>
#include <vector>

namespace bincast {

// Empirical CDF of a fit sample, used for the probability-integral
// transform. pit(x) = #{samples <= x} / n, clamped into (0, 1]: queries
// below the support map to 1/(2n). pit_inverse is the nearest-rank
// quantile, so pit_inverse(pit(x)) == x for every x in the fit sample.
class EmpiricalCdf {
public:
    EmpiricalCdf() = default;
    explicit EmpiricalCdf(std::span<const double> sample);

    double pit(double x) const;
    double pit_inverse(double u) const;  // throws unless u in (0, 1]

    std::size_t sample_size() const { return sorted_.size(); }
    const std::vector<double>& sorted_support() const { return sorted_; }

private:
    std::vector<double> sorted_;
};

}  // namespace bincast
