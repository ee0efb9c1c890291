#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pairq/matrix.hpp"
#include "pairq/product_quantizer.hpp"

namespace pairq {

enum class RotationInit { Identity, Pca };

struct OPQParams {
    std::size_t m = 8;
    std::size_t k = 256;
    /// Number of PQ steps; a rotation update runs between consecutive ones.
    std::size_t outer_iters = 20;
    /// Lloyd iterations per PQ step (k-means++ start on the first, warm start after).
    std::size_t kmeans_iters = 25;
    std::uint64_t seed = 0;
    RotationInit init = RotationInit::Identity;
    bool allow_padding = true;
};

/// Orthogonal rotation followed by PQ in the rotated (padded) space.
struct OPQModel {
    DenseMatrix rotation;  // dim x dim, orthogonal
    PQCodebook codebook;
    /// Reconstruction objective after every PQ step; non-increasing.
    std::vector<double> objective_trace;
    /// The final PQ step ended at a Lloyd fixed point in every block.
    bool converged = false;

    std::size_t source_dim() const noexcept { return codebook.source_dim(); }
    std::size_t dim() const noexcept { return codebook.dim(); }

    /// R * pad(x); accepts length source_dim or dim.
    DenseVector rotate(std::span<const double> x) const;
    PQCode encode(std::span<const double> x) const;
    CodeMatrix encode_all(const DenseMatrix& data) const;
    /// Codeword concatenation in the rotated space.
    DenseVector decode_rotated(std::span<const std::uint8_t> code) const;
    /// R^T * decode_rotated(code), length dim (padding coordinates included).
    DenseVector decode(std::span<const std::uint8_t> code) const;
};

OPQModel train_opq(const DenseMatrix& data, const OPQParams& params);

/// sum_i ||R x_i - xhat_i||^2, measured in the rotated space.
double reconstruction_error(const OPQModel& model, const DenseMatrix& data);

/// Rows R * pad(x_i).
DenseMatrix rotate_all(const OPQModel& model, const DenseMatrix& data);

}  // namespace pairq
