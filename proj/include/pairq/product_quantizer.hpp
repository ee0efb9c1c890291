#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pairq/matrix.hpp"

namespace pairq {

/// One sub-codeword index per block; K <= 256 so a byte each.
using PQCode = std::vector<std::uint8_t>;

/// Row-major batch of codes, `count` x `m` bytes.
struct CodeMatrix {
    std::size_t count = 0;
    std::size_t m = 0;
    std::vector<std::uint8_t> data;

    CodeMatrix() = default;
    CodeMatrix(std::size_t count_, std::size_t m_) : count(count_), m(m_), data(count_ * m_, 0) {}

    std::span<std::uint8_t> row(std::size_t i) { return {data.data() + i * m, m}; }
    std::span<const std::uint8_t> row(std::size_t i) const { return {data.data() + i * m, m}; }

    friend bool operator==(const CodeMatrix&, const CodeMatrix&) = default;
};

/// M sub-codebooks of K centroids over contiguous blocks of a `dim`-dimensional
/// space. `source_dim` <= `dim` is the dimension before zero padding.
class PQCodebook {
public:
    PQCodebook() = default;
    /// Validates: sum(sub_dims) = dim, 1 <= K <= 256, M >= 1, finite centroids
    /// of length K * dim laid out block after block.
    PQCodebook(std::size_t source_dim, std::vector<std::size_t> sub_dims, std::size_t k,
               std::vector<double> centroids);

    std::size_t source_dim() const noexcept { return source_dim_; }
    std::size_t dim() const noexcept { return dim_; }
    std::size_t m() const noexcept { return sub_dims_.size(); }
    std::size_t k() const noexcept { return k_; }
    const std::vector<std::size_t>& sub_dims() const noexcept { return sub_dims_; }
    std::size_t offset(std::size_t block) const noexcept { return offsets_[block]; }

    /// K x sub_dims[block] centroids of one block, row-major.
    const double* block(std::size_t block) const noexcept { return centroids_.data() + k_ * offsets_[block]; }
    std::span<const double> centroid(std::size_t block, std::size_t word) const;
    const std::vector<double>& centroids() const noexcept { return centroids_; }

    friend bool operator==(const PQCodebook&, const PQCodebook&) = default;

private:
    std::size_t source_dim_ = 0;
    std::size_t dim_ = 0;
    std::size_t k_ = 0;
    std::vector<std::size_t> sub_dims_;
    std::vector<std::size_t> offsets_;
    std::vector<double> centroids_;
};

struct PQParams {
    std::size_t m = 8;
    std::size_t k = 256;
    std::size_t max_iters = 25;
    std::uint64_t seed = 0;
    /// Zero-pad to the next multiple of m instead of rejecting n % m != 0.
    bool allow_padding = true;
};

/// Padded dimension used for `n` columns split into `m` blocks.
std::size_t padded_dim(std::size_t n, std::size_t m, bool allow_padding);

struct PQRefineResult {
    PQCodebook codebook;
    CodeMatrix codes;        // final Lloyd assignments of the training rows
    double objective = 0.0;  // sum of squared errors of those assignments
    bool converged = true;   // every block reached a Lloyd fixed point
};

/// Independent k-means per block; block j uses seed + j.
PQCodebook train_pq(const DenseMatrix& data, const PQParams& params);
/// train_pq that also reports the final training assignments.
PQRefineResult train_pq_detailed(const DenseMatrix& data, const PQParams& params);

/// Lloyd iterations on already padded data, warm-started from `codebook`.
PQRefineResult refine_pq(const PQCodebook& codebook, const DenseMatrix& padded_data, std::size_t iters);

/// Accepts vectors of length source_dim (zero padded internally) or dim.
PQCode pq_encode(const PQCodebook& codebook, std::span<const double> x);
void pq_encode_into(const PQCodebook& codebook, std::span<const double> x, std::span<std::uint8_t> code);
CodeMatrix pq_encode_all(const PQCodebook& codebook, const DenseMatrix& data);

/// Concatenated sub-codewords, length dim.
DenseVector pq_decode(const PQCodebook& codebook, std::span<const std::uint8_t> code);
DenseMatrix pq_decode_all(const PQCodebook& codebook, const CodeMatrix& codes);

/// sum_i ||x_i - decode(encode(x_i))||^2 in the (padded) codebook space.
double reconstruction_error(const PQCodebook& codebook, const DenseMatrix& data);

/// Throws OutOfRange if a code does not fit the codebook.
void validate_code(const PQCodebook& codebook, std::span<const std::uint8_t> code);

}  // namespace pairq
