#pragma once

#include <span>
#include <string>
#include <vector>

namespace bincast {

enum class BinKind { Linear, Quantile, LloydMax };

BinKind parse_bin_kind(const std::string& token);
std::string to_string(BinKind kind);

// A scalar quantization map. Buckets are half-open value intervals
// [l_{b-1}, l_b) bounded by `edges`, with the implicit outer edges at
// -inf/+inf, so the map is total on the reals; a value exactly on an edge
// belongs to the upper bucket. `centers[b-1]` is the reconstruction value
// of bucket b (buckets are 1-based).
//
// Fitting may produce fewer buckets than requested when the data cannot
// support them (duplicate-heavy samples); `collapsed` records that and
// bins() reports the effective count.
struct BinningSpec {
    std::vector<double> edges;    // size bins()-1, strictly ascending
    std::vector<double> centers;  // size bins(),  strictly ascending
    BinKind kind = BinKind::Quantile;
    int requested_bins = 0;
    bool collapsed = false;

    int bins() const { return static_cast<int>(centers.size()); }
};

// Bucket id of x, in 1..bins(). Total on the reals.
int bin_index(const BinningSpec& spec, double x);

// Reconstruction value of bucket b; throws std::invalid_argument when b is
// outside 1..bins().
double reconstruct(const BinningSpec& spec, int b);

// Equal-width bins over [x_min, x_max]: B-2 bounded interior intervals
// plus the two unbounded edge buckets. Edge b sits at
// x_min + (b-1)(x_max-x_min)/(B-2) for b = 1..B-1. Centers are interval
// midpoints, clamped to the data range for the two unbounded buckets.
// Requires B >= 3 and x_min < x_max.
BinningSpec fit_linear_bins(double x_min, double x_max, int bins);

// Quantile bins: centers are nearest-rank empirical quantiles at the
// mid-levels (2b-1)/(2B); edges sit at the boundary-level quantiles b/B so
// that every bucket holds n/B samples up to +-1 whenever the sample has
// enough distinct values. Consecutive equal centers collapse into one
// bucket. Requires B >= 2 and a non-empty sample.
BinningSpec fit_quantile_bins(std::span<const double> values, int bins);

// Mean squared reconstruction error of the quantizer over `values`.
double quantization_mse(const BinningSpec& spec, std::span<const double> values);

struct LloydResult {
    BinningSpec spec;
    std::vector<double> mse_history;  // per-iteration MSE of the winning run
    double final_mse = 0.0;
    int iterations = 0;
};

// Lloyd-Max optimal scalar quantizer: alternates conditional-mean center
// updates with midpoint edge updates until the relative MSE improvement
// drops below `tol` or `max_iter` is hit. MSE is non-increasing across
// iterations. Empty buckets are repaired by splitting the
// highest-distortion bucket at its median.
//
// The alternation is run from the quantile-binning centers and from a few
// deterministic alternative seeds (largest-gap splits, plus the exact
// dynamic-programming partition when the instance is small enough); the
// best final quantizer wins. A single quantile-seeded run can stall in a
// local optimum ({0,6,7,8,14} with B=2 is a two-line counterexample).
LloydResult lloyd_max_detailed(std::span<const double> values, int bins, int max_iter = 100,
                               double tol = 1e-10);
BinningSpec lloyd_max(std::span<const double> values, int bins, int max_iter = 100,
                      double tol = 1e-10);

// Dispatch on kind. Linear uses the sample min/max as the bounded range.
BinningSpec fit_bins(std::span<const double> values, int bins, BinKind kind);

}  // namespace bincast
