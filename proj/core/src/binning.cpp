#include "bincast/binning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bincast {

namespace {

// Prefix-sum view of a sorted sample for O(1) segment statistics.
struct SortedStats {
    std::vector<double> v;       // ascending
    std::vector<double> sum;     // sum[i] = v[0] + ... + v[i-1]
    std::vector<double> sum_sq;

    explicit SortedStats(std::span<const double> values) : v(values.begin(), values.end()) {
        std::sort(v.begin(), v.end());
        const std::size_t n = v.size();
        sum.assign(n + 1, 0.0);
        sum_sq.assign(n + 1, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            sum[i + 1] = sum[i] + v[i];
            sum_sq[i + 1] = sum_sq[i] + v[i] * v[i];
        }
    }

    std::size_t n() const { return v.size(); }

    double segment_mean(std::size_t lo, std::size_t hi) const {  // [lo, hi)
        return (sum[hi] - sum[lo]) / static_cast<double>(hi - lo);
    }

    double segment_sse(std::size_t lo, std::size_t hi) const {  // [lo, hi)
        const double s = sum[hi] - sum[lo];
        const double q = sum_sq[hi] - sum_sq[lo];
        const double sse = q - s * s / static_cast<double>(hi - lo);
        return sse > 0.0 ? sse : 0.0;  // guard tiny negative rounding
    }
};

// Contiguous partition of the sorted sample, stored as segment start
// indices (size K+1, bounds[0] = 0, bounds[K] = n), all segments non-empty.
using Partition = std::vector<std::size_t>;

double partition_sse(const SortedStats& stats, const Partition& bounds) {
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < bounds.size(); ++k) {
        total += stats.segment_sse(bounds[k], bounds[k + 1]);
    }
    return total;
}

std::vector<double> partition_centers(const SortedStats& stats, const Partition& bounds) {
    std::vector<double> centers;
    centers.reserve(bounds.size() - 1);
    for (std::size_t k = 0; k + 1 < bounds.size(); ++k) {
        centers.push_back(stats.segment_mean(bounds[k], bounds[k + 1]));
    }
    return centers;
}

// Assignment step: segments induced by the midpoint edges of `centers`.
// A sample exactly on a midpoint joins the lower bucket, which is what lets
// the alternation walk centers toward the optimum instead of freezing
// (nearest-center assignment with ties resolved downward). Empty segments
// are repaired by splitting the highest-SSE segment at its median until the
// target count is restored (or no segment is splittable).
Partition assign_and_repair(const SortedStats& stats, const std::vector<double>& centers) {
    const std::size_t n = stats.n();
    std::vector<std::pair<std::size_t, std::size_t>> segments;  // non-empty [lo, hi)
    std::size_t lo = 0;
    for (std::size_t k = 0; k + 1 < centers.size(); ++k) {
        const double mid = 0.5 * (centers[k] + centers[k + 1]);
        const std::size_t hi =
            static_cast<std::size_t>(std::upper_bound(stats.v.begin() + static_cast<std::ptrdiff_t>(lo),
                                                      stats.v.end(), mid) -
                                     stats.v.begin());
        if (hi > lo) segments.emplace_back(lo, hi);
        lo = hi;
    }
    if (n > lo) segments.emplace_back(lo, n);

    const std::size_t target = centers.size();
    while (segments.size() < target) {
        std::size_t best = segments.size();
        double best_sse = -1.0;
        for (std::size_t k = 0; k < segments.size(); ++k) {
            if (segments[k].second - segments[k].first < 2) continue;
            const double sse = stats.segment_sse(segments[k].first, segments[k].second);
            if (sse > best_sse) {
                best_sse = sse;
                best = k;
            }
        }
        if (best == segments.size()) break;  // nothing splittable left
        const auto [s_lo, s_hi] = segments[best];
        const std::size_t mid = s_lo + (s_hi - s_lo) / 2;
        segments[best] = {s_lo, mid};
        segments.insert(segments.begin() + static_cast<std::ptrdiff_t>(best) + 1, {mid, s_hi});
    }

    Partition bounds;
    bounds.reserve(segments.size() + 1);
    bounds.push_back(0);
    for (const auto& seg : segments) bounds.push_back(seg.second);
    return bounds;
}

struct LloydRun {
    Partition bounds;
    std::vector<double> mse_history;
    double final_mse = 0.0;
};

LloydRun lloyd_iterate(const SortedStats& stats, std::vector<double> centers, int max_iter,
                       double tol) {
    const double n = static_cast<double>(stats.n());
    LloydRun run;
    run.bounds = assign_and_repair(stats, centers);
    double mse = partition_sse(stats, run.bounds) / n;
    run.mse_history.push_back(mse);
    for (int iter = 0; iter < max_iter; ++iter) {
        centers = partition_centers(stats, run.bounds);
        Partition next = assign_and_repair(stats, centers);
        const double next_mse = partition_sse(stats, next) / n;
        run.mse_history.push_back(next_mse);
        const bool converged = next == run.bounds ||
                               (mse - next_mse) <= tol * std::max(mse, 1e-300);
        run.bounds = std::move(next);
        mse = next_mse;
        if (converged) break;
    }
    run.final_mse = mse;
    return run;
}

// Exact optimal contiguous partition by dynamic programming, O(n^2 K).
Partition dp_optimal_partition(const SortedStats& stats, std::size_t k_parts) {
    const std::size_t n = stats.n();
    const double inf = std::numeric_limits<double>::infinity();
    // cost[i] = best SSE for the first i points using the current number of
    // segments; rebuilt layer by layer with backpointers.
    std::vector<double> prev(n + 1, inf), cur(n + 1, inf);
    std::vector<std::vector<std::size_t>> back(k_parts + 1,
                                               std::vector<std::size_t>(n + 1, 0));
    prev[0] = 0.0;
    for (std::size_t k = 1; k <= k_parts; ++k) {
        std::fill(cur.begin(), cur.end(), inf);
        for (std::size_t i = k; i <= n; ++i) {
            for (std::size_t j = k - 1; j < i; ++j) {
                if (prev[j] == inf) continue;
                const double c = prev[j] + stats.segment_sse(j, i);
                if (c < cur[i]) {
                    cur[i] = c;
                    back[k][i] = j;
                }
            }
        }
        std::swap(prev, cur);
    }
    Partition bounds(k_parts + 1);
    bounds[k_parts] = n;
    for (std::size_t k = k_parts; k > 0; --k) bounds[k - 1] = back[k][bounds[k]];
    return bounds;
}

std::vector<double> gap_seed_centers(const SortedStats& stats, std::size_t k_parts) {
    const std::size_t n = stats.n();
    std::vector<std::size_t> order(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return stats.v[a + 1] - stats.v[a] > stats.v[b + 1] - stats.v[b];
    });
    std::vector<std::size_t> cuts(order.begin(),
                                  order.begin() + static_cast<std::ptrdiff_t>(
                                                      std::min(k_parts - 1, order.size())));
    std::sort(cuts.begin(), cuts.end());
    Partition bounds;
    bounds.push_back(0);
    for (std::size_t c : cuts) bounds.push_back(c + 1);
    bounds.push_back(n);
    bounds.erase(std::unique(bounds.begin(), bounds.end()), bounds.end());
    return partition_centers(stats, bounds);
}

BinningSpec spec_from_centers(std::vector<double> centers, BinKind kind, int requested) {
    centers.erase(std::unique(centers.begin(), centers.end()), centers.end());
    BinningSpec spec;
    spec.kind = kind;
    spec.requested_bins = requested;
    spec.centers = std::move(centers);
    spec.collapsed = spec.bins() < requested;
    spec.edges.reserve(spec.centers.size() - 1);
    for (std::size_t k = 0; k + 1 < spec.centers.size(); ++k) {
        spec.edges.push_back(0.5 * (spec.centers[k] + spec.centers[k + 1]));
    }
    return spec;
}

std::size_t ceil_div(long long a, long long b) { return static_cast<std::size_t>((a + b - 1) / b); }

}  // namespace

BinKind parse_bin_kind(const std::string& token) {
    if (token == "linear") return BinKind::Linear;
    if (token == "quantile") return BinKind::Quantile;
    if (token == "lloyd-max" || token == "lloyd_max" || token == "lloyd") return BinKind::LloydMax;
    throw std::invalid_argument("unknown bin kind '" + token +
                                "' (expected linear, quantile or lloyd-max)");
}

std::string to_string(BinKind kind) {
    switch (kind) {
        case BinKind::Linear: return "linear";
        case BinKind::Quantile: return "quantile";
        case BinKind::LloydMax: return "lloyd-max";
    }
    return "?";
}

int bin_index(const BinningSpec& spec, double x) {
    const auto it = std::upper_bound(spec.edges.begin(), spec.edges.end(), x);
    return static_cast<int>(it - spec.edges.begin()) + 1;
}

double reconstruct(const BinningSpec& spec, int b) {
    if (b < 1 || b > spec.bins()) {
        throw std::invalid_argument("reconstruct: bucket " + std::to_string(b) +
                                    " out of range 1.." + std::to_string(spec.bins()));
    }
    return spec.centers[static_cast<std::size_t>(b - 1)];
}

BinningSpec fit_linear_bins(double x_min, double x_max, int bins) {
    if (bins < 3) throw std::invalid_argument("fit_linear_bins: need at least 3 buckets");
    if (!(x_min < x_max)) throw std::invalid_argument("fit_linear_bins: x_min must be < x_max");

    BinningSpec spec;
    spec.kind = BinKind::Linear;
    spec.requested_bins = bins;
    const double width = (x_max - x_min) / static_cast<double>(bins - 2);
    spec.edges.resize(static_cast<std::size_t>(bins - 1));
    for (int b = 1; b <= bins - 1; ++b) {
        spec.edges[static_cast<std::size_t>(b - 1)] = x_min + (b - 1) * width;
    }
    spec.centers.resize(static_cast<std::size_t>(bins));
    spec.centers.front() = spec.edges.front();  // unbounded buckets clamp to the range
    spec.centers.back() = spec.edges.back();
    for (int b = 2; b <= bins - 1; ++b) {
        spec.centers[static_cast<std::size_t>(b - 1)] =
            0.5 * (spec.edges[static_cast<std::size_t>(b - 2)] +
                   spec.edges[static_cast<std::size_t>(b - 1)]);
    }
    return spec;
}

BinningSpec fit_quantile_bins(std::span<const double> values, int bins) {
    if (bins < 2) throw std::invalid_argument("fit_quantile_bins: need at least 2 buckets");
    if (values.empty()) throw std::invalid_argument("fit_quantile_bins: empty sample");

    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const long long n = static_cast<long long>(sorted.size());
    const long long B = bins;

    // Centers at the mid-levels (2b-1)/(2B), nearest rank; remember the last
    // original bucket index of each distinct center so boundary levels
    // survive the collapse.
    std::vector<double> centers;
    std::vector<long long> last_original;  // per distinct center
    for (long long b = 1; b <= B; ++b) {
        const std::size_t rank = std::min<std::size_t>(
            ceil_div((2 * b - 1) * n, 2 * B), static_cast<std::size_t>(n));
        const double c = sorted[std::max<std::size_t>(rank, 1) - 1];
        if (!centers.empty() && c == centers.back()) {
            last_original.back() = b;
        } else {
            centers.push_back(c);
            last_original.push_back(b);
        }
    }

    BinningSpec spec;
    spec.kind = BinKind::Quantile;
    spec.requested_bins = bins;
    spec.centers = centers;
    spec.collapsed = spec.bins() < bins;
    spec.edges.reserve(centers.size() - 1);
    for (std::size_t k = 0; k + 1 < centers.size(); ++k) {
        const std::size_t rank =
            std::min<std::size_t>(ceil_div(last_original[k] * n, B), static_cast<std::size_t>(n));
        double edge = sorted[std::max<std::size_t>(rank, 1) - 1];
        if (!(edge > centers[k] && edge <= centers[k + 1])) {
            edge = 0.5 * (centers[k] + centers[k + 1]);  // degenerate gap fallback
        }
        spec.edges.push_back(edge);
    }
    return spec;
}

double quantization_mse(const BinningSpec& spec, std::span<const double> values) {
    if (values.empty()) return 0.0;
    double total = 0.0;
    for (double x : values) {
        const double err = x - reconstruct(spec, bin_index(spec, x));
        total += err * err;
    }
    return total / static_cast<double>(values.size());
}

LloydResult lloyd_max_detailed(std::span<const double> values, int bins, int max_iter,
                               double tol) {
    if (max_iter <= 0) throw std::invalid_argument("lloyd_max: max_iter must be positive");
    if (bins < 2) throw std::invalid_argument("lloyd_max: need at least 2 buckets");
    if (values.empty()) throw std::invalid_argument("lloyd_max: empty sample");

    SortedStats stats(values);
    const std::size_t n = stats.n();

    std::vector<std::vector<double>> seeds;
    seeds.push_back(fit_quantile_bins(values, bins).centers);
    if (n > 2) seeds.push_back(gap_seed_centers(stats, static_cast<std::size_t>(bins)));
    const double dp_budget = 2e7;
    const std::size_t k_parts = std::min<std::size_t>(static_cast<std::size_t>(bins), n);
    if (k_parts >= 2 &&
        static_cast<double>(n) * static_cast<double>(n) * static_cast<double>(k_parts) <=
            dp_budget) {
        seeds.push_back(partition_centers(stats, dp_optimal_partition(stats, k_parts)));
    }

    LloydRun best;
    bool have_best = false;
    for (auto& seed : seeds) {
        seed.erase(std::unique(seed.begin(), seed.end()), seed.end());
        if (seed.empty()) continue;
        LloydRun run = lloyd_iterate(stats, seed, max_iter, tol);
        if (!have_best || run.final_mse < best.final_mse) {
            best = std::move(run);
            have_best = true;
        }
    }

    LloydResult result;
    result.spec = spec_from_centers(partition_centers(stats, best.bounds), BinKind::LloydMax, bins);
    result.mse_history = std::move(best.mse_history);
    result.final_mse = best.final_mse;
    result.iterations = static_cast<int>(result.mse_history.size()) - 1;
    return result;
}

BinningSpec lloyd_max(std::span<const double> values, int bins, int max_iter, double tol) {
    return lloyd_max_detailed(values, bins, max_iter, tol).spec;
}

BinningSpec fit_bins(std::span<const double> values, int bins, BinKind kind) {
    switch (kind) {
        case BinKind::Quantile: return fit_quantile_bins(values, bins);
        case BinKind::LloydMax: return lloyd_max(values, bins);
        case BinKind::Linear: {
            if (values.empty()) throw std::invalid_argument("fit_bins: empty sample");
            const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
            if (*lo == *hi) {
                // constant sample: single effective bucket
                BinningSpec spec;
                spec.kind = BinKind::Linear;
                spec.requested_bins = bins;
                spec.centers = {*lo};
                spec.collapsed = true;
                return spec;
            }
            return fit_linear_bins(*lo, *hi, bins);
        }
    }
    throw std::logic_error("unreachable bin kind");
}

}  // namespace bincast
