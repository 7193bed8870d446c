#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace hdspc {

/// Seeded random source. Every replication or search start owns one,
/// derived from (seed, stream index) so results never depend on the
/// order in which streams are consumed.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    /// Independent stream keyed by (seed, index).
    static Rng stream(std::uint64_t seed, std::uint64_t index);

    double normal() { return normal_(engine_); }
    double uniform() { return uniform_(engine_); }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform integer in [0, n).
    std::size_t below(std::size_t n);
    /// Uniform integer in [lo, hi].
    long between(long lo, long hi);

    /// k distinct indices from [0, n), in draw order.
    std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k);

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) noexcept;

}  // namespace hdspc
