#include "pairq/product_quantizer.hpp"

#include <cmath>
#include <string>

#include "pairq/error.hpp"
#include "pairq/kernels.hpp"
#include "pairq/kmeans.hpp"

namespace pairq {

PQCodebook::PQCodebook(std::size_t source_dim, std::vector<std::size_t> sub_dims, std::size_t k,
                       std::vector<double> centroids)
    : source_dim_(source_dim), k_(k), sub_dims_(std::move(sub_dims)), centroids_(std::move(centroids)) {
    if (sub_dims_.empty()) throw Error(ErrorKind::InvalidArgument, "codebook needs M >= 1");
    if (k_ == 0 || k_ > 256) {
        throw Error(ErrorKind::InvalidArgument, "codebook needs 1 <= K <= 256, got " + std::to_string(k_));
    }
    offsets_.resize(sub_dims_.size());
    for (std::size_t j = 0; j < sub_dims_.size(); ++j) {
        if (sub_dims_[j] == 0) throw Error(ErrorKind::InvalidArgument, "empty sub-space");
        offsets_[j] = dim_;
        dim_ += sub_dims_[j];
    }
    if (source_dim_ > dim_) {
        throw Error(ErrorKind::DimensionMismatch, "source dimension exceeds codebook dimension");
    }
    if (centroids_.size() != k_ * dim_) {
        throw Error(ErrorKind::DimensionMismatch, "centroid storage has " + std::to_string(centroids_.size()) +
                                                      " values, expected " + std::to_string(k_ * dim_));
    }
    for (double v : centroids_) {
        if (!std::isfinite(v)) throw Error(ErrorKind::NonFinite, "codebook centroid");
    }
}

std::span<const double> PQCodebook::centroid(std::size_t block_index, std::size_t word) const {
    if (block_index >= m() || word >= k_) throw Error(ErrorKind::OutOfRange, "centroid index");
    return {block(block_index) + word * sub_dims_[block_index], sub_dims_[block_index]};
}

std::size_t padded_dim(std::size_t n, std::size_t m, bool allow_padding) {
    if (m == 0) throw Error(ErrorKind::InvalidArgument, "M must be >= 1");
    if (n % m == 0) return n;
    if (!allow_padding) {
        throw Error(ErrorKind::DimensionMismatch, "dimension " + std::to_string(n) +
                                                      " is not divisible by M = " + std::to_string(m));
    }
    return (n / m + 1) * m;
}

namespace {

DenseMatrix block_columns(const DenseMatrix& data, std::size_t offset, std::size_t width) {
    DenseMatrix out(data.rows(), width);
    for (std::size_t r = 0; r < data.rows(); ++r) {
        const double* src = data.row(r).data() + offset;
        std::copy(src, src + width, out.row(r).begin());
    }
    return out;
}

DenseMatrix block_centroids(const PQCodebook& codebook, std::size_t j) {
    const std::size_t width = codebook.sub_dims()[j];
    std::vector<double> values(codebook.block(j), codebook.block(j) + codebook.k() * width);
    return DenseMatrix(codebook.k(), width, std::move(values));
}

}  // namespace

PQRefineResult train_pq_detailed(const DenseMatrix& data, const PQParams& params) {
    if (params.k == 0 || params.k > 256) {
        throw Error(ErrorKind::InvalidArgument, "PQ needs 1 <= K <= 256, got " + std::to_string(params.k));
    }
    const std::size_t n = data.cols();
    const std::size_t dim = padded_dim(n, params.m, params.allow_padding);
    const DenseMatrix padded = pad_columns(data, dim);
    const std::size_t width = dim / params.m;

    PQRefineResult out;
    out.codes = CodeMatrix(data.rows(), params.m);
    std::vector<double> centroids;
    centroids.reserve(params.k * dim);
    for (std::size_t j = 0; j < params.m; ++j) {
        const DenseMatrix sub = block_columns(padded, j * width, width);
        const KMeansResult km = kmeans(sub, KMeansParams{params.k, params.max_iters, params.seed + j});
        centroids.insert(centroids.end(), km.centroids.values().begin(), km.centroids.values().end());
        for (std::size_t i = 0; i < data.rows(); ++i) {
            out.codes.row(i)[j] = static_cast<std::uint8_t>(km.assignments[i]);
        }
        out.objective += kmeans_objective(sub, km.centroids, km.assignments);
        out.converged = out.converged && km.converged;
    }
    out.codebook = PQCodebook(n, std::vector<std::size_t>(params.m, width), params.k, std::move(centroids));
    return out;
}

PQCodebook train_pq(const DenseMatrix& data, const PQParams& params) {
    return train_pq_detailed(data, params).codebook;
}

PQRefineResult refine_pq(const PQCodebook& codebook, const DenseMatrix& padded_data, std::size_t iters) {
    if (padded_data.cols() != codebook.dim()) {
        throw Error(ErrorKind::DimensionMismatch, "refine_pq data has dimension " +
                                                      std::to_string(padded_data.cols()) + ", codebook " +
                                                      std::to_string(codebook.dim()));
    }
    PQRefineResult out;
    out.codes = CodeMatrix(padded_data.rows(), codebook.m());
    std::vector<double> centroids;
    centroids.reserve(codebook.centroids().size());
    for (std::size_t j = 0; j < codebook.m(); ++j) {
        const DenseMatrix sub = block_columns(padded_data, codebook.offset(j), codebook.sub_dims()[j]);
        const KMeansResult km = kmeans_refine(sub, block_centroids(codebook, j), iters);
        centroids.insert(centroids.end(), km.centroids.values().begin(), km.centroids.values().end());
        for (std::size_t i = 0; i < padded_data.rows(); ++i) {
            out.codes.row(i)[j] = static_cast<std::uint8_t>(km.assignments[i]);
        }
        out.objective += kmeans_objective(sub, km.centroids, km.assignments);
        out.converged = out.converged && km.converged;
    }
    out.codebook = PQCodebook(codebook.source_dim(), codebook.sub_dims(), codebook.k(), std::move(centroids));
    return out;
}

void pq_encode_into(const PQCodebook& codebook, std::span<const double> x, std::span<std::uint8_t> code) {
    if (x.size() != codebook.dim() && x.size() != codebook.source_dim()) {
        throw Error(ErrorKind::DimensionMismatch, "encode expects length " +
                                                      std::to_string(codebook.source_dim()) + " or " +
                                                      std::to_string(codebook.dim()) + ", got " +
                                                      std::to_string(x.size()));
    }
    if (code.size() != codebook.m()) throw Error(ErrorKind::DimensionMismatch, "code length");
    const auto& kt = kernels::active();
    DenseVector padded;
    const double* src = x.data();
    if (x.size() != codebook.dim()) {
        padded.assign(codebook.dim(), 0.0);
        std::copy(x.begin(), x.end(), padded.begin());
        src = padded.data();
    }
    for (std::size_t j = 0; j < codebook.m(); ++j) {
        code[j] = static_cast<std::uint8_t>(kt.argmin_l2(src + codebook.offset(j), codebook.block(j),
                                                         codebook.k(), codebook.sub_dims()[j], nullptr));
    }
}

PQCode pq_encode(const PQCodebook& codebook, std::span<const double> x) {
    PQCode code(codebook.m());
    pq_encode_into(codebook, x, code);
    return code;
}

CodeMatrix pq_encode_all(const PQCodebook& codebook, const DenseMatrix& data) {
    CodeMatrix codes(data.rows(), codebook.m());
    for (std::size_t i = 0; i < data.rows(); ++i) pq_encode_into(codebook, data.row(i), codes.row(i));
    return codes;
}

void validate_code(const PQCodebook& codebook, std::span<const std::uint8_t> code) {
    if (code.size() != codebook.m()) {
        throw Error(ErrorKind::DimensionMismatch, "code has " + std::to_string(code.size()) +
                                                      " entries, codebook has M = " +
                                                      std::to_string(codebook.m()));
    }
    for (std::size_t j = 0; j < code.size(); ++j) {
        if (code[j] >= codebook.k()) {
            throw Error(ErrorKind::OutOfRange, "code index " + std::to_string(code[j]) + " in block " +
                                                   std::to_string(j) + " with K = " +
                                                   std::to_string(codebook.k()));
        }
    }
}

DenseVector pq_decode(const PQCodebook& codebook, std::span<const std::uint8_t> code) {
    validate_code(codebook, code);
    DenseVector out(codebook.dim());
    for (std::size_t j = 0; j < codebook.m(); ++j) {
        const auto c = codebook.centroid(j, code[j]);
        std::copy(c.begin(), c.end(), out.begin() + static_cast<std::ptrdiff_t>(codebook.offset(j)));
    }
    return out;
}

DenseMatrix pq_decode_all(const PQCodebook& codebook, const CodeMatrix& codes) {
    DenseMatrix out(codes.count, codebook.dim());
    for (std::size_t i = 0; i < codes.count; ++i) {
        const DenseVector v = pq_decode(codebook, codes.row(i));
        std::copy(v.begin(), v.end(), out.row(i).begin());
    }
    return out;
}

double reconstruction_error(const PQCodebook& codebook, const DenseMatrix& data) {
    if (data.cols() != codebook.dim() && data.cols() != codebook.source_dim()) {
        throw Error(ErrorKind::DimensionMismatch, "reconstruction_error data dimension");
    }
    const DenseMatrix padded = pad_columns(data, codebook.dim());
    const auto& kt = kernels::active();
    double total = 0.0;
    for (std::size_t i = 0; i < padded.rows(); ++i) {
        const double* x = padded.row(i).data();
        for (std::size_t j = 0; j < codebook.m(); ++j) {
            double d = 0.0;
            kt.argmin_l2(x + codebook.offset(j), codebook.block(j), codebook.k(), codebook.sub_dims()[j], &d);
            total += d;
        }
    }
    return total;
}

}  // namespace pairq
