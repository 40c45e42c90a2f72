#ifndef GREENSEG_RANDOM_HPP
#define GREENSEG_RANDOM_HPP

#include <cstdint>
#include <random>

namespace greenseg {

/// splitmix64 finalizer; used to derive independent stream seeds from a
/// base seed plus a salt (room index, hop index, ...).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Thin wrapper over mt19937_64 exposing only the draws the library needs.
/// All draws go through standard-specified generator output, so sequences
/// are identical across platforms for a given seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    /// Uniform index in [0, n). n must be > 0.
    std::size_t uniform_index(std::size_t n) {
        return static_cast<std::size_t>(gen_() % static_cast<std::uint64_t>(n));
    }

    /// Uniform real in [0, 1) using the top 53 bits.
    double uniform01() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    /// Uniform real in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

private:
    std::mt19937_64 gen_;
};

} // namespace greenseg

#endif // GREENSEG_RANDOM_HPP
