#include "bincast/heads.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bincast {

namespace {

double log_sum_exp(std::span<const double> logits) {
    double m = logits[0];
    for (double v : logits) m = std::max(m, v);
    double s = 0.0;
    for (double v : logits) s += std::exp(v - m);
    return m + std::log(s);
}

constexpr double kPi = 3.14159265358979323846;

}  // namespace

double categorical_nll(std::span<const double> logits, int target_bin) {
    if (target_bin < 1 || target_bin > static_cast<int>(logits.size())) {
        throw std::invalid_argument("categorical_nll: target bucket " + std::to_string(target_bin) +
                                    " out of range 1.." + std::to_string(logits.size()));
    }
    return log_sum_exp(logits) - logits[static_cast<std::size_t>(target_bin - 1)];
}

void categorical_nll_grad(std::span<const double> logits, int target_bin,
                          std::span<double> grad_out) {
    if (target_bin < 1 || target_bin > static_cast<int>(logits.size())) {
        throw std::invalid_argument("categorical_nll_grad: target bucket out of range");
    }
    const double lse = log_sum_exp(logits);
    for (std::size_t i = 0; i < logits.size(); ++i) grad_out[i] = std::exp(logits[i] - lse);
    grad_out[static_cast<std::size_t>(target_bin - 1)] -= 1.0;
}

std::vector<double> softmax(std::span<const double> logits) {
    std::vector<double> p(logits.size());
    const double lse = log_sum_exp(logits);
    for (std::size_t i = 0; i < logits.size(); ++i) p[i] = std::exp(logits[i] - lse);
    return p;
}

int categorical_sample_index(std::span<const double> logits, Rng& rng) {
    const double lse = log_sum_exp(logits);
    const double u = rng.uniform();
    double cum = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        cum += std::exp(logits[i] - lse);
        if (u < cum) return static_cast<int>(i) + 1;
    }
    return static_cast<int>(logits.size());  // guard against rounding in cum
}

double categorical_sample(const CategoricalHead& head, Rng& rng) {
    if (head.binning == nullptr) throw std::logic_error("categorical_sample: missing binning");
    const int b = categorical_sample_index(head.logits, rng);
    return head.unscale.invert(reconstruct(*head.binning, b));
}

double studentt_nll(const StudentTParams& p, double scale_m, double z) {
    const double u = (z / scale_m - p.mu) / p.sigma;
    const double half_nu = 0.5 * p.nu;
    return -std::lgamma(half_nu + 0.5) + std::lgamma(half_nu) + 0.5 * std::log(p.nu * kPi) +
           std::log(p.sigma) + (half_nu + 0.5) * std::log1p(u * u / p.nu) + std::log(scale_m);
}

StudentTGrad studentt_nll_grad(const StudentTParams& p, double scale_m, double z) {
    const double u = (z / scale_m - p.mu) / p.sigma;
    const double denom = p.nu + u * u;
    StudentTGrad g;
    g.d_mu = -(p.nu + 1.0) * u / (denom * p.sigma);
    g.d_sigma = (1.0 - (p.nu + 1.0) * u * u / denom) / p.sigma;
    g.d_nu = 0.5 * (digamma(0.5 * p.nu) - digamma(0.5 * (p.nu + 1.0))) + 0.5 / p.nu +
             0.5 * std::log1p(u * u / p.nu) - (p.nu + 1.0) * u * u / (2.0 * p.nu * denom);
    return g;
}

double studentt_sample(const StudentTParams& p, double scale_m, Rng& rng) {
    return scale_m * (p.mu + p.sigma * rng.student_t(p.nu));
}

double digamma(double x) {
    // recurrence into the asymptotic regime, then the standard series
    double result = 0.0;
    while (x < 6.0) {
        result -= 1.0 / x;
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    result += std::log(x) - 0.5 * inv -
              inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 - inv2 / 240.0)));
    return result;
}

ForecastDistribution::ForecastDistribution(std::vector<std::vector<double>> paths, int horizon)
    : paths_(std::move(paths)), horizon_(horizon) {
    if (paths_.empty()) throw std::invalid_argument("ForecastDistribution: need >= 1 sample path");
    for (const auto& p : paths_) {
        if (static_cast<int>(p.size()) != horizon) {
            throw std::invalid_argument("ForecastDistribution: path length mismatch");
        }
    }
    sorted_.resize(static_cast<std::size_t>(horizon));
}

const std::vector<double>& ForecastDistribution::sorted_step(int step) const {
    if (step < 0 || step >= horizon_) {
        throw std::invalid_argument("ForecastDistribution: step out of range");
    }
    auto& cache = sorted_[static_cast<std::size_t>(step)];
    if (cache.empty()) {
        cache.reserve(paths_.size());
        for (const auto& p : paths_) cache.push_back(p[static_cast<std::size_t>(step)]);
        std::sort(cache.begin(), cache.end());
    }
    return cache;
}

double ForecastDistribution::quantile(int step, double alpha) const {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("quantile: alpha must be in (0, 1)");
    }
    const auto& samples = sorted_step(step);
    const auto n = samples.size();
    auto rank = static_cast<std::size_t>(std::ceil(alpha * static_cast<double>(n)));
    rank = std::clamp<std::size_t>(rank, 1, n);
    return samples[rank - 1];
}

double ForecastDistribution::sample_mean(int step) const {
    const auto& samples = sorted_step(step);
    double s = 0.0;
    for (double v : samples) s += v;
    return s / static_cast<double>(samples.size());
}

}  // namespace bincast
