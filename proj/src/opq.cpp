#include "pairq/opq.hpp"

#include <string>

#include "pairq/error.hpp"
#include "pairq/linalg.hpp"

namespace pairq {

namespace {

DenseMatrix pca_rotation(const DenseMatrix& padded) {
    const std::size_t n = padded.rows();
    const std::size_t d = padded.cols();
    DenseVector mean(d, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t t = 0; t < d; ++t) mean[t] += padded(i, t);
    for (double& v : mean) v /= static_cast<double>(n);
    DenseMatrix cov(d, d);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t a = 0; a < d; ++a) {
            const double xa = padded(i, a) - mean[a];
            for (std::size_t b = a; b < d; ++b) cov(a, b) += xa * (padded(i, b) - mean[b]);
        }
    }
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = a; b < d; ++b) cov(b, a) = cov(a, b);
    return sym_eig(cov).eigenvectors.transposed();
}

// sum_i xhat_i x_i^T
DenseMatrix cross_moment(const DenseMatrix& x, const DenseMatrix& xhat) {
    const std::size_t d = x.cols();
    DenseMatrix out(d, d);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const double* xi = x.row(i).data();
        const double* hi = xhat.row(i).data();
        for (std::size_t a = 0; a < d; ++a) {
            const double h = hi[a];
            double* dst = out.row(a).data();
            for (std::size_t b = 0; b < d; ++b) dst[b] += h * xi[b];
        }
    }
    return out;
}

}  // namespace

OPQModel train_opq(const DenseMatrix& data, const OPQParams& params) {
    const std::size_t dim = padded_dim(data.cols(), params.m, params.allow_padding);
    const DenseMatrix padded = pad_columns(data, dim);
    const std::size_t steps = params.outer_iters == 0 ? 1 : params.outer_iters;

    OPQModel model;
    model.rotation = params.init == RotationInit::Pca ? pca_rotation(padded) : DenseMatrix::identity(dim);
    const bool identity_start = params.init == RotationInit::Identity;

    for (std::size_t step = 0; step < steps; ++step) {
        const DenseMatrix rotated = (step == 0 && identity_start) ? padded : map_rows(model.rotation, padded);
        PQRefineResult pq;
        if (step == 0) {
            pq = train_pq_detailed(rotated, PQParams{params.m, params.k, params.kmeans_iters, params.seed,
                                                     params.allow_padding});
            pq.codebook = PQCodebook(data.cols(), pq.codebook.sub_dims(), pq.codebook.k(),
                                     pq.codebook.centroids());
        } else {
            pq = refine_pq(model.codebook, rotated, params.kmeans_iters);
        }
        model.codebook = std::move(pq.codebook);
        model.objective_trace.push_back(pq.objective);
        model.converged = pq.converged;
        if (step + 1 == steps) break;

        const DenseMatrix reconstructed = pq_decode_all(model.codebook, pq.codes);
        model.rotation = orthogonal_polar(cross_moment(padded, reconstructed));
    }
    return model;
}

DenseVector OPQModel::rotate(std::span<const double> x) const {
    if (x.size() != dim() && x.size() != source_dim()) {
        throw Error(ErrorKind::DimensionMismatch, "OPQ expects length " + std::to_string(source_dim()) +
                                                      " or " + std::to_string(dim()) + ", got " +
                                                      std::to_string(x.size()));
    }
    if (x.size() == dim()) return matvec(rotation, x);
    DenseVector padded(dim(), 0.0);
    std::copy(x.begin(), x.end(), padded.begin());
    return matvec(rotation, padded);
}

PQCode OPQModel::encode(std::span<const double> x) const { return pq_encode(codebook, rotate(x)); }

CodeMatrix OPQModel::encode_all(const DenseMatrix& data) const {
    return pq_encode_all(codebook, rotate_all(*this, data));
}

DenseVector OPQModel::decode_rotated(std::span<const std::uint8_t> code) const {
    return pq_decode(codebook, code);
}

DenseVector OPQModel::decode(std::span<const std::uint8_t> code) const {
    return matvec_transposed(rotation, decode_rotated(code));
}

DenseMatrix rotate_all(const OPQModel& model, const DenseMatrix& data) {
    if (data.cols() != model.dim() && data.cols() != model.source_dim()) {
        throw Error(ErrorKind::DimensionMismatch, "OPQ data dimension " + std::to_string(data.cols()));
    }
    return map_rows(model.rotation, pad_columns(data, model.dim()));
}

double reconstruction_error(const OPQModel& model, const DenseMatrix& data) {
    return reconstruction_error(model.codebook, rotate_all(model, data));
}

}  // namespace pairq
