#pragma once

#include <span>
#include <vector>

#include "bincast/binning.hpp"
#include "bincast/rng.hpp"
#include "bincast/scaling.hpp"

namespace bincast {

// ---------------------------------------------------------------------------
// Categorical head over bucket ids
// ---------------------------------------------------------------------------

// -log softmax(logits)[target_bin], target_bin is 1-based.
double categorical_nll(std::span<const double> logits, int target_bin);

// d nll / d logits = softmax - onehot, written into grad_out.
void categorical_nll_grad(std::span<const double> logits, int target_bin,
                          std::span<double> grad_out);

std::vector<double> softmax(std::span<const double> logits);

// Bucket id (1-based) drawn proportionally to softmax(logits).
int categorical_sample_index(std::span<const double> logits, Rng& rng);

// Predictive categorical distribution over an output binning, with the
// per-series affine scale whose inverse maps reconstructions back to the
// original value domain (identity scale for locally-binned outputs).
struct CategoricalHead {
    std::vector<double> logits;
    const BinningSpec* binning = nullptr;
    AffineScale unscale;  // inverse applied to reconstructed centers
};

// Draws a bucket, reconstructs its center and un-scales it.
double categorical_sample(const CategoricalHead& head, Rng& rng);

// ---------------------------------------------------------------------------
// Mean-scaled Student-t head
// ---------------------------------------------------------------------------

// Location/scale/dof of the Student-t on the scaled series z' = z / m.
struct StudentTParams {
    double mu = 0.0;
    double sigma = 1.0;  // > 0
    double nu = 3.0;     // > 2
};

// Negative log density of the raw value z under the location-scale t on
// z' = z/m, including the log m change-of-variables term, so the result is
// a proper density in z.
double studentt_nll(const StudentTParams& p, double scale_m, double z);

struct StudentTGrad {
    double d_mu = 0.0;
    double d_sigma = 0.0;
    double d_nu = 0.0;
};

StudentTGrad studentt_nll_grad(const StudentTParams& p, double scale_m, double z);

// m * (mu + sigma * t_nu)
double studentt_sample(const StudentTParams& p, double scale_m, Rng& rng);

double digamma(double x);

// ---------------------------------------------------------------------------
// Forecast sample paths
// ---------------------------------------------------------------------------

// Monte-Carlo predictive distribution: `paths` sample trajectories of
// `horizon` steps each, already in the original value domain. Quantiles are
// nearest-rank per step; per-step sorted caches are built lazily.
class ForecastDistribution {
public:
    ForecastDistribution(std::vector<std::vector<double>> paths, int horizon);

    int horizon() const { return horizon_; }
    int num_paths() const { return static_cast<int>(paths_.size()); }
    const std::vector<std::vector<double>>& paths() const { return paths_; }

    // step in 0..horizon-1, alpha in (0, 1)
    double quantile(int step, double alpha) const;

    double sample_mean(int step) const;

private:
    std::vector<std::vector<double>> paths_;          // [path][step]
    mutable std::vector<std::vector<double>> sorted_;  // [step] -> sorted samples
    int horizon_ = 0;

    const std::vector<double>& sorted_step(int step) const;
};

}  // namespace bincast
