#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "pairq/matrix.hpp"

namespace pairq::test {

inline DenseMatrix gaussian_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed, double scale = 1.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, scale);
    DenseMatrix m(rows, cols);
    for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = normal(rng);
    return m;
}

/// Gaussian rows with per-column standard deviations decaying as (j+1)^-decay.
inline DenseMatrix anisotropic(std::size_t rows, std::size_t cols, std::uint64_t seed, double decay) {
    DenseMatrix m = gaussian_matrix(rows, cols, seed);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) *= std::pow(static_cast<double>(j + 1), -decay);
    return m;
}

inline double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a.data()[i] - b.data()[i]));
    return d;
}

inline double relative_frobenius(const DenseMatrix& a, const DenseMatrix& b) {
    return frobenius_norm(a - b) / frobenius_norm(b);
}

}  // namespace pairq::test
