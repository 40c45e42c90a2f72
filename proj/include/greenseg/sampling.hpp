#ifndef GREENSEG_SAMPLING_HPP
#define GREENSEG_SAMPLING_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "greenseg/error.hpp"
#include "greenseg/point_cloud.hpp"
#include "greenseg/random.hpp"

namespace greenseg {

struct SampleSpec {
    double ratio = 1.0; // in (0, 1]
    std::uint64_t seed = 0;
};

inline std::size_t sample_size(double ratio, std::size_t n) {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(ratio * static_cast<double>(n))));
}

/// Uniform random subset of max(1, round(ratio*n)) indices from [0, n),
/// drawn by a seeded partial Fisher-Yates shuffle. Pure function of
/// (n, spec).
inline std::vector<std::uint32_t> random_sample(std::size_t n, const SampleSpec& spec) {
    if (n == 0) throw ArgumentError("random_sample: n must be positive");
    if (!(spec.ratio > 0.0) || spec.ratio > 1.0)
        throw ArgumentError("random_sample: ratio must be in (0, 1]");
    const std::size_t m = std::min(n, sample_size(spec.ratio, n));

    std::vector<std::uint32_t> pool(n);
    std::iota(pool.begin(), pool.end(), 0u);
    Rng rng(spec.seed);
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t j = i + rng.uniform_index(n - i);
        std::swap(pool[i], pool[j]);
    }
    pool.resize(m);
    return pool;
}

/// Greedy max-min (farthest point) sampling from a seeded random start.
/// Kept as the ablation baseline the hop pipeline replaces with random
/// sampling.
inline std::vector<std::uint32_t> farthest_point_sample(std::span<const Vec3> positions,
                                                        std::size_t count, std::uint64_t seed) {
    const std::size_t n = positions.size();
    if (n == 0) throw ArgumentError("farthest_point_sample: no points");
    if (count == 0 || count > n)
        throw ArgumentError("farthest_point_sample: count must be in [1, N]");

    Rng rng(seed);
    std::vector<std::uint32_t> picked;
    picked.reserve(count);
    std::vector<double> min_dist(n, std::numeric_limits<double>::infinity());
    std::vector<char> taken(n, 0);

    std::uint32_t current = static_cast<std::uint32_t>(rng.uniform_index(n));
    picked.push_back(current);
    taken[current] = 1;
    for (std::size_t step = 1; step < count; ++step) {
        std::uint32_t best = 0;
        double best_dist = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = squared_distance(positions[i], positions[current]);
            if (d < min_dist[i]) min_dist[i] = d;
            if (!taken[i] && min_dist[i] > best_dist) { // ties keep the lower index
                best_dist = min_dist[i];
                best = static_cast<std::uint32_t>(i);
            }
        }
        current = best;
        picked.push_back(current);
        taken[current] = 1;
    }
    return picked;
}

} // namespace greenseg

#endif // GREENSEG_SAMPLING_HPP
