#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pairq/matrix.hpp"

namespace pairq {

/// Zero-mean (plus optional offset) Gaussian with covariance B diag(lambda) B^T.
struct CovarianceSpec {
    /// lambda_i = scale * (i + 1)^(-decay); decay 0 gives an isotropic covariance.
    double decay = 0.0;
    double scale = 1.0;
    /// Overrides the decay law when non-empty; must have length n and be >= 0.
    std::vector<double> eigenvalues;
    /// Random orthogonal B; identity otherwise.
    bool random_basis = true;
    /// Norm of the mean vector, placed along a random direction.
    double mean_offset = 0.0;
};

struct SyntheticSpec {
    std::size_t n = 32;
    std::size_t nx = 10000;
    std::size_t nq_train = 2000;
    std::size_t nq_eval = 200;
    CovarianceSpec database;
    /// Drawn independently of the database distribution.
    CovarianceSpec queries;
};

struct SyntheticData {
    DenseMatrix database;
    DenseMatrix train_queries;
    DenseMatrix eval_queries;
    /// lambda_max / lambda_min of the mean q q^T over the training queries
    /// (infinity when singular).
    double query_g_condition = 0.0;
};

/// Covariance eigenvalues for `spec`; throws NotPositiveSemidefinite on negative entries.
std::vector<double> covariance_eigenvalues(const CovarianceSpec& spec, std::size_t n);

/// Haar-distributed orthogonal matrix (polar factor of a Gaussian matrix).
DenseMatrix random_orthogonal(std::size_t n, std::uint64_t seed);

SyntheticData gen_synthetic(const SyntheticSpec& spec, std::uint64_t seed);

/// Sample covariance (1/N) sum (x - mean)(x - mean)^T.
DenseMatrix sample_covariance(const DenseMatrix& points);

}  // namespace pairq
