#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

namespace bincast {

// Deterministic random stream. All draw algorithms are implemented here
// rather than delegating to std::*_distribution, so that a given (seed,
// call sequence) produces identical values on every platform and compiler.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {
        // warm up so that small consecutive seeds diverge immediately
        next_u64();
        next_u64();
    }

    // Independent stream derived from (seed, stream index), e.g. one per
    // series or per sample path.
    Rng(std::uint64_t seed, std::uint64_t stream)
        : Rng(mix(seed, mix(stream, 0x9e3779b97f4a7c15ull))) {}

    Rng(std::uint64_t seed, std::string_view stream_name)
        : Rng(seed, fnv1a(stream_name)) {}

    std::uint64_t next_u64() {
        // splitmix64
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform on [0, 1)
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // uniform on (0, 1]; safe as input to log()
    double uniform_pos() { return 1.0 - uniform(); }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // integer in [0, n)
    std::uint64_t uniform_index(std::uint64_t n) {
        // modulo bias is negligible for the n used here (n << 2^64)
        return n == 0 ? 0 : next_u64() % n;
    }

    // standard normal via Box-Muller (no cached spare, to keep the stream
    // position a pure function of the number of calls)
    double normal() {
        const double u1 = uniform_pos();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    // Gamma(shape alpha >= 1, scale 1), Marsaglia-Tsang squeeze method
    double gamma(double alpha) {
        const double d = alpha - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x = normal();
            double v = 1.0 + c * x;
            if (v <= 0.0) continue;
            v = v * v * v;
            const double u = uniform_pos();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    // Student-t with nu > 2 degrees of freedom: Z / sqrt(V / nu), V ~ chi2_nu
    double student_t(double nu) {
        const double z = normal();
        const double chi2 = 2.0 * gamma(0.5 * nu);
        return z / std::sqrt(chi2 / nu);
    }

    static std::uint64_t fnv1a(std::string_view s) {
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (unsigned char c : s) {
            h ^= c;
            h *= 0x100000001b3ull;
        }
        return h;
    }

private:
    static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
        std::uint64_t z = a + 0x9e3779b97f4a7c15ull * (b | 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

}  // namespace bincast
