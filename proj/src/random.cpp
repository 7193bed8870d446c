#include "hdspc/random.hpp"

#include <numeric>

#include "hdspc/errors.hpp"

namespace hdspc {

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

Rng::Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

Rng Rng::stream(std::uint64_t seed, std::uint64_t index) {
    return Rng(mix_seed(seed, index));
}

std::size_t Rng::below(std::size_t n) {
    if (n == 0) fail(ErrorKind::InvalidArgument, "Rng::below requires n > 0");
    std::uniform_int_distribution<std::size_t> dist(0, n - 1);
    return dist(engine_);
}

long Rng::between(long lo, long hi) {
    if (hi < lo) fail(ErrorKind::InvalidArgument, "Rng::between requires lo <= hi");
    std::uniform_int_distribution<long> dist(lo, hi);
    return dist(engine_);
}

std::vector<std::size_t> Rng::sample_without_replacement(std::size_t n, std::size_t k) {
    if (k > n) fail(ErrorKind::InvalidArgument, "cannot draw more indices than available");
    // Partial Fisher-Yates.
    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) {
        std::size_t j = i + below(n - i);
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
}

}  // namespace hdspc
