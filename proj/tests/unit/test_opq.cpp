#include "doctest.h"

#include "pairq/error.hpp"
#include "pairq/linalg.hpp"
#include "pairq/opq.hpp"
#include "test_util.hpp"

using namespace pairq;
using pairq::test::gaussian_matrix;

namespace {

// Correlated data whose variance is concentrated in the first block.
DenseMatrix skewed(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    const DenseMatrix mix = orthogonal_polar(gaussian_matrix(cols, cols, seed + 1));
    return map_rows(mix, test::anisotropic(rows, cols, seed, 1.0));
}

// (1/N) sum (x - mean)(x - mean)^T, written out so the test does not lean on the library.
DenseMatrix sample_covariance_like(const DenseMatrix& x) {
    const std::size_t d = x.cols();
    DenseVector mean(d, 0.0);
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t t = 0; t < d; ++t) mean[t] += x(i, t) / static_cast<double>(x.rows());
    DenseMatrix cov(d, d);
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t b = 0; b < d; ++b)
                cov(a, b) += (x(i, a) - mean[a]) * (x(i, b) - mean[b]) / static_cast<double>(x.rows());
    return cov;
}

}  // namespace

TEST_CASE("OPQ keeps the rotation orthogonal and the objective non-increasing") {
    const DenseMatrix x = skewed(600, 8, 1);
    const OPQModel model = train_opq(x, {4, 16, 8, 20, 3});
    CHECK(model.objective_trace.size() == 8);
    CHECK(orthogonality_error(model.rotation) < 1e-12);
    for (std::size_t i = 1; i < model.objective_trace.size(); ++i) {
        CHECK(model.objective_trace[i] <= model.objective_trace[i - 1] + 1e-9);
    }
}

TEST_CASE("the recorded objective is the reconstruction error of the final model") {
    const DenseMatrix x = skewed(400, 6, 2);
    const OPQModel model = train_opq(x, {3, 8, 5, 200, 0});
    REQUIRE(model.converged);
    CHECK(model.objective_trace.back() == doctest::Approx(reconstruction_error(model, x)).epsilon(1e-10));
}

TEST_CASE("learning a rotation beats plain PQ on correlated data") {
    const DenseMatrix x = skewed(1000, 8, 3);
    const OPQModel model = train_opq(x, {4, 16, 10, 25, 0});
    CHECK(model.objective_trace.back() < model.objective_trace.front());
    const PQCodebook pq = train_pq(x, {4, 16, 25, 0});
    CHECK(model.objective_trace.back() < reconstruction_error(pq, x));
}

TEST_CASE("a single step is plain PQ with an identity rotation") {
    const DenseMatrix x = gaussian_matrix(200, 4, 4);
    const OPQModel model = train_opq(x, {2, 8, 1, 20, 5});
    CHECK(model.rotation == DenseMatrix::identity(4));
    CHECK(model.codebook == train_pq(x, {2, 8, 20, 5}));
    CHECK(train_opq(x, {2, 8, 0, 20, 5}).codebook == model.codebook);
}

TEST_CASE("decode undoes the rotation") {
    const DenseMatrix x = skewed(200, 6, 5);
    const OPQModel model = train_opq(x, {2, 200, 3, 10, 0});  // K = N: every point is a codeword
    for (std::size_t i = 0; i < 10; ++i) {
        const DenseVector back = model.decode(model.encode(x.row(i)));
        for (std::size_t t = 0; t < 6; ++t) CHECK(back[t] == doctest::Approx(x(i, t)).epsilon(1e-9));
    }
}

TEST_CASE("PCA initialisation and padding are supported") {
    const DenseMatrix x = skewed(300, 7, 6);
    OPQParams params{2, 8, 4, 15, 1};
    params.init = RotationInit::Pca;
    const OPQModel model = train_opq(x, params);
    CHECK(model.dim() == 8);
    CHECK(model.source_dim() == 7);
    CHECK(orthogonality_error(model.rotation) < 1e-12);
    CHECK(model.encode_all(x).count == 300);
    params.allow_padding = false;
    CHECK_THROWS_AS(train_opq(x, params), Error);
}

TEST_CASE("training is deterministic for a fixed seed") {
    const DenseMatrix x = skewed(300, 4, 7);
    const OPQModel a = train_opq(x, {2, 8, 4, 10, 11});
    const OPQModel b = train_opq(x, {2, 8, 4, 10, 11});
    CHECK(a.rotation == b.rotation);
    CHECK(a.codebook == b.codebook);
    CHECK(a.objective_trace == b.objective_trace);
}

TEST_CASE("reconstruction error special cases") {
    const DenseMatrix x = skewed(200, 4, 8);
    const OPQModel model = train_opq(x, {2, 8, 3, 10, 0});
    // Decoded vectors, mapped back to the input space, reconstruct perfectly.
    const CodeMatrix codes = model.encode_all(x);
    DenseMatrix decoded(x.rows(), 4);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const DenseVector d = model.decode(codes.row(i));
        std::copy(d.begin(), d.end(), decoded.row(i).begin());
    }
    CHECK(reconstruction_error(model, decoded) < 1e-20 * static_cast<double>(x.rows()));

    // One codeword: N times the trace of the covariance.
    const OPQModel one = train_opq(x, {1, 1, 2, 5, 0});
    const double trace = [&] {
        double t = 0.0;
        const DenseMatrix cov = sample_covariance_like(x);
        for (std::size_t i = 0; i < 4; ++i) t += cov(i, i);
        return t;
    }();
    CHECK(reconstruction_error(one, x) == doctest::Approx(200.0 * trace).epsilon(1e-10));
}

TEST_CASE("a rotated product distribution favours OPQ over PQ") {
    // Two independent 2-d blocks with very different spreads, then rotated.
    DenseMatrix x = test::anisotropic(2000, 4, 9, 0.0);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        x(i, 0) *= 4.0;
        x(i, 1) *= 4.0;
    }
    const DenseMatrix rotated = map_rows(orthogonal_polar(gaussian_matrix(4, 4, 10)), x);
    const OPQModel opq = train_opq(rotated, {2, 16, 10, 20, 0});
    const PQCodebook pq = train_pq(rotated, {2, 16, 20, 0});
    CHECK(opq.objective_trace.back() <= reconstruction_error(pq, rotated));
}
