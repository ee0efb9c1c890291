#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "pairq/matrix.hpp"

namespace pairq {

struct KMeansParams {
    std::size_t k = 256;
    std::size_t max_iters = 25;
    std::uint64_t seed = 0;
};

struct KMeansResult {
    DenseMatrix centroids;                    // k x d
    std::vector<std::uint32_t> assignments;   // one per point
    std::vector<double> objective_trace;      // sum of squared errors after each update step
    std::size_t iterations = 0;               // completed assign+update rounds
    bool converged = false;                   // an assignment pass changed nothing
};

/// Lloyd's algorithm with k-means++ seeding.
///
/// Every update step sets each centroid to the mean of its members, so when
/// `converged` is set the result is a Lloyd fixed point. Empty clusters are
/// repaired by moving in the point farthest from its centroid (taken from a
/// cluster with at least two members). When every remaining point sits on its
/// centroid, as with heavy duplication, the cluster is left empty.
KMeansResult kmeans(const DenseMatrix& points, const KMeansParams& params);

/// Lloyd iterations warm-started from `initial` centroids. With max_iters = 0
/// the centroids are kept and only the assignments are computed.
KMeansResult kmeans_refine(const DenseMatrix& points, DenseMatrix initial, std::size_t max_iters);

/// k-means++ seeding: first centre uniform, then proportional to squared distance.
DenseMatrix kmeans_plus_plus(const DenseMatrix& points, std::size_t k, std::mt19937_64& rng);

/// Nearest centroid (squared L2), lowest index on ties.
std::size_t assign(std::span<const double> x, const DenseMatrix& centroids);

/// sum_i ||points_i - centroids[assignments_i]||^2
double kmeans_objective(const DenseMatrix& points, const DenseMatrix& centroids,
                        std::span<const std::uint32_t> assignments);

}  // namespace pairq
