#include "pairq/kmeans.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "pairq/error.hpp"
#include "pairq/kernels.hpp"

namespace pairq {

namespace {

void validate_points(const DenseMatrix& points, std::size_t k) {
    if (points.rows() == 0) throw Error(ErrorKind::InvalidArgument, "k-means needs at least one point");
    if (k == 0) throw Error(ErrorKind::InvalidArgument, "k-means needs k >= 1");
    if (k > points.rows()) {
        throw Error(ErrorKind::InvalidArgument, "k = " + std::to_string(k) + " exceeds point count " +
                                                    std::to_string(points.rows()));
    }
    for (double v : points.values()) {
        if (!std::isfinite(v)) throw Error(ErrorKind::NonFinite, "k-means input contains non-finite values");
    }
}

// Moves one point into each empty cluster. Returns true if anything moved.
bool repair_empty_clusters(std::vector<std::uint32_t>& assignments, std::vector<double>& dist,
                           std::vector<std::size_t>& counts) {
    bool moved = false;
    for (std::size_t c = 0; c < counts.size(); ++c) {
        if (counts[c] != 0) continue;
        std::size_t far = assignments.size();
        double far_d = -1.0;
        for (std::size_t p = 0; p < assignments.size(); ++p) {
            if (counts[assignments[p]] > 1 && dist[p] > 0.0 && dist[p] > far_d) {
                far_d = dist[p];
                far = p;
            }
        }
        if (far == assignments.size()) break;  // only duplicates left; the cluster stays empty
        --counts[assignments[far]];
        assignments[far] = static_cast<std::uint32_t>(c);
        counts[c] = 1;
        dist[far] = 0.0;
        moved = true;
    }
    return moved;
}

KMeansResult lloyd(const DenseMatrix& points, DenseMatrix centroids, std::size_t max_iters) {
    const auto& kt = kernels::active();
    const std::size_t n = points.rows();
    const std::size_t d = points.cols();
    const std::size_t k = centroids.rows();

    KMeansResult result;
    result.assignments.assign(n, std::numeric_limits<std::uint32_t>::max());
    std::vector<double> dist(n);
    std::vector<std::size_t> counts(k);
    std::vector<double> sums(k * d);

    // Each round assigns, then updates. A final assignment pass runs after
    // the last update so the returned assignments are nearest-centroid.
    for (std::size_t iter = 0;; ++iter) {
        std::size_t changed = 0;
        std::fill(counts.begin(), counts.end(), 0);
        for (std::size_t p = 0; p < n; ++p) {
            const auto a = static_cast<std::uint32_t>(
                kt.argmin_l2(points.row(p).data(), centroids.data(), k, d, &dist[p]));
            if (a != result.assignments[p]) {
                result.assignments[p] = a;
                ++changed;
            }
            ++counts[a];
        }
        if (changed == 0) {
            result.converged = true;
            break;
        }
        if (iter == max_iters) break;
        repair_empty_clusters(result.assignments, dist, counts);

        std::fill(sums.begin(), sums.end(), 0.0);
        for (std::size_t p = 0; p < n; ++p) {
            const double* x = points.row(p).data();
            double* s = sums.data() + result.assignments[p] * d;
            for (std::size_t t = 0; t < d; ++t) s[t] += x[t];
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] == 0) continue;
            const double inv = static_cast<double>(counts[c]);
            auto row = centroids.row(c);
            for (std::size_t t = 0; t < d; ++t) row[t] = sums[c * d + t] / inv;
        }
        result.objective_trace.push_back(kmeans_objective(points, centroids, result.assignments));
        ++result.iterations;
    }
    result.centroids = std::move(centroids);
    return result;
}

}  // namespace

DenseMatrix kmeans_plus_plus(const DenseMatrix& points, std::size_t k, std::mt19937_64& rng) {
    validate_points(points, k);
    const auto& kt = kernels::active();
    const std::size_t n = points.rows();
    const std::size_t d = points.cols();
    DenseMatrix centroids(k, d);
    std::vector<bool> chosen(n, false);
    std::vector<double> d2(n, std::numeric_limits<double>::infinity());
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::size_t pick = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    for (std::size_t c = 0; c < k; ++c) {
        if (c > 0) {
            double total = 0.0;
            for (std::size_t p = 0; p < n; ++p) total += d2[p];
            if (total > 0.0) {
                const double target = unit(rng) * total;
                double cum = 0.0;
                pick = n;
                std::size_t last_positive = 0;
                for (std::size_t p = 0; p < n; ++p) {
                    if (d2[p] <= 0.0) continue;
                    last_positive = p;
                    cum += d2[p];
                    if (cum > target) {
                        pick = p;
                        break;
                    }
                }
                if (pick == n) pick = last_positive;
            } else {
                // Remaining points all coincide with chosen centres.
                std::vector<std::size_t> free;
                for (std::size_t p = 0; p < n; ++p)
                    if (!chosen[p]) free.push_back(p);
                pick = free[std::uniform_int_distribution<std::size_t>(0, free.size() - 1)(rng)];
            }
        }
        chosen[pick] = true;
        const auto src = points.row(pick);
        std::copy(src.begin(), src.end(), centroids.row(c).begin());
        for (std::size_t p = 0; p < n; ++p) {
            d2[p] = std::min(d2[p], kt.l2sqr(points.row(p).data(), src.data(), d));
        }
    }
    return centroids;
}

KMeansResult kmeans(const DenseMatrix& points, const KMeansParams& params) {
    validate_points(points, params.k);
    if (params.max_iters == 0) throw Error(ErrorKind::InvalidArgument, "k-means needs max_iters >= 1");
    std::mt19937_64 rng(params.seed);
    return lloyd(points, kmeans_plus_plus(points, params.k, rng), params.max_iters);
}

KMeansResult kmeans_refine(const DenseMatrix& points, DenseMatrix initial, std::size_t max_iters) {
    validate_points(points, initial.rows());
    if (initial.cols() != points.cols()) {
        throw Error(ErrorKind::DimensionMismatch, "initial centroids have dimension " +
                                                      std::to_string(initial.cols()) + ", points " +
                                                      std::to_string(points.cols()));
    }
    return lloyd(points, std::move(initial), max_iters);
}

std::size_t assign(std::span<const double> x, const DenseMatrix& centroids) {
    if (x.size() != centroids.cols()) {
        throw Error(ErrorKind::DimensionMismatch, "vector of length " + std::to_string(x.size()) +
                                                      " vs centroids of dimension " +
                                                      std::to_string(centroids.cols()));
    }
    if (centroids.rows() == 0) throw Error(ErrorKind::InvalidArgument, "no centroids");
    return kernels::active().argmin_l2(x.data(), centroids.data(), centroids.rows(), centroids.cols(),
                                       nullptr);
}

double kmeans_objective(const DenseMatrix& points, const DenseMatrix& centroids,
                        std::span<const std::uint32_t> assignments) {
    const auto& kt = kernels::active();
    double total = 0.0;
    for (std::size_t p = 0; p < points.rows(); ++p) {
        total += kt.l2sqr(points.row(p).data(), centroids.row(assignments[p]).data(), points.cols());
    }
    return total;
}

}  // namespace pairq
