#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "hdspc/matrixcore.hpp"
#include "hdspc/random.hpp"

namespace hdspc::test {

inline Matrix gaussian(Index rows, Index cols, std::uint64_t seed) {
    Rng rng(seed);
    Matrix x(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        for (Index j = 0; j < cols; ++j) x(i, j) = rng.normal();
    }
    return x;
}

inline Matrix random_symmetric(Index p, std::uint64_t seed) {
    const Matrix a = gaussian(p, p, seed);
    return (a + a.transpose()) / 2.0;
}

inline double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

}  // namespace hdspc::test
