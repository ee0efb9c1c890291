#include "pairq/synthetic.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "pairq/error.hpp"
#include "pairq/linalg.hpp"
#include "pairq/pair_transform.hpp"

namespace pairq {

namespace {

// Independent streams for the parts of one synthetic draw.
enum Stream : std::uint64_t { DbBasis = 1, DbMean, DbSamples, QBasis, QMean, QTrain, QEval };

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
    // splitmix64 finaliser
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

struct Gaussian {
    DenseMatrix basis;
    std::vector<double> root;  // sqrt(lambda)
    DenseVector mean;
};

Gaussian make_gaussian(const CovarianceSpec& spec, std::size_t n, std::uint64_t seed, std::uint64_t basis_stream,
                       std::uint64_t mean_stream) {
    Gaussian g;
    const auto lambda = covariance_eigenvalues(spec, n);
    g.root.resize(n);
    for (std::size_t i = 0; i < n; ++i) g.root[i] = std::sqrt(lambda[i]);
    g.basis = spec.random_basis ? random_orthogonal(n, stream_seed(seed, basis_stream)) : DenseMatrix::identity(n);
    g.mean.assign(n, 0.0);
    if (spec.mean_offset != 0.0) {
        std::mt19937_64 rng(stream_seed(seed, mean_stream));
        std::normal_distribution<double> normal;
        for (double& v : g.mean) v = normal(rng);
        const double norm = std::sqrt(squared_norm(g.mean));
        for (double& v : g.mean) v *= spec.mean_offset / norm;
    }
    return g;
}

DenseMatrix sample(const Gaussian& g, std::size_t count, std::uint64_t seed) {
    const std::size_t n = g.root.size();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    DenseMatrix out(count, n);
    DenseVector xi(n);
    for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t t = 0; t < n; ++t) xi[t] = normal(rng) * g.root[t];
        auto row = out.row(i);
        for (std::size_t a = 0; a < n; ++a) row[a] = g.mean[a] + dot(g.basis.row(a), xi);
    }
    return out;
}

}  // namespace

std::vector<double> covariance_eigenvalues(const CovarianceSpec& spec, std::size_t n) {
    std::vector<double> lambda;
    if (!spec.eigenvalues.empty()) {
        if (spec.eigenvalues.size() != n) {
            throw Error(ErrorKind::DimensionMismatch, "explicit eigenvalue list has length " +
                                                          std::to_string(spec.eigenvalues.size()) + ", n = " +
                                                          std::to_string(n));
        }
        lambda = spec.eigenvalues;
    } else {
        lambda.resize(n);
        for (std::size_t i = 0; i < n; ++i) lambda[i] = spec.scale * std::pow(static_cast<double>(i + 1), -spec.decay);
    }
    for (double l : lambda) {
        if (!(l >= 0.0) || !std::isfinite(l)) {
            throw Error(ErrorKind::NotPositiveSemidefinite, "covariance eigenvalue " + std::to_string(l));
        }
    }
    return lambda;
}

DenseMatrix random_orthogonal(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    DenseMatrix a(n, n);
    for (std::size_t i = 0; i < a.size(); ++i) a.data()[i] = normal(rng);
    return orthogonal_polar(a);
}

SyntheticData gen_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
    if (spec.n < 2) throw Error(ErrorKind::InvalidArgument, "synthetic data needs n >= 2");
    const Gaussian db = make_gaussian(spec.database, spec.n, seed, DbBasis, DbMean);
    const Gaussian qs = make_gaussian(spec.queries, spec.n, seed, QBasis, QMean);
    SyntheticData out;
    out.database = sample(db, spec.nx, stream_seed(seed, DbSamples));
    out.train_queries = sample(qs, spec.nq_train, stream_seed(seed, QTrain));
    out.eval_queries = sample(qs, spec.nq_eval, stream_seed(seed, QEval));
    out.query_g_condition = std::numeric_limits<double>::infinity();
    if (spec.nq_train > 0) {
        const auto eig = sym_eig(second_moment(out.train_queries));
        if (eig.eigenvalues.back() > 0.0) out.query_g_condition = eig.eigenvalues.front() / eig.eigenvalues.back();
    }
    return out;
}

DenseMatrix sample_covariance(const DenseMatrix& points) {
    const std::size_t n = points.rows();
    const std::size_t d = points.cols();
    if (n == 0) throw Error(ErrorKind::InvalidArgument, "covariance of an empty sample");
    DenseVector mean(d, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t t = 0; t < d; ++t) mean[t] += points(i, t);
    for (double& v : mean) v /= static_cast<double>(n);
    DenseMatrix cov(d, d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t b = 0; b < d; ++b) cov(a, b) += (points(i, a) - mean[a]) * (points(i, b) - mean[b]);
    return (1.0 / static_cast<double>(n)) * cov;
}

}  // namespace pairq
