#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "pairq/estimator.hpp"
#include "pairq/matrix.hpp"
#include "pairq/opq.hpp"

namespace pairq {

enum class PairMode : std::uint8_t { ScalarProduct = 1, SquaredDistance = 2 };

const char* to_string(PairMode mode) noexcept;

/// Linear map z = C x (scalar products) or z = C [x, ||x||^2] (squared
/// distances) under which plain reconstruction error equals the query-weighted
/// pairwise distortion. C is the symmetric square root of the query second
/// moment G, so C^T C = G.
struct PairTransform {
    PairMode mode = PairMode::ScalarProduct;
    std::size_t n = 0;   // source dimension
    std::size_t m = 0;   // n, or n + 1 in squared-distance mode
    DenseMatrix c;       // m x m
    DenseMatrix c_pinv;  // m x m
    DenseMatrix g;       // m x m, kept for inspection

    /// z for one database vector of length n.
    DenseVector map(std::span<const double> x) const;
    DenseMatrix map_all(const DenseMatrix& database) const;
    /// (C^+)^T q in scalar mode, (C^+)^T [-2q, 1] in squared-distance mode.
    DenseVector query_vector(std::span<const double> q) const;
};

/// y = [x, ||x||^2]
DenseVector lift_point(std::span<const double> x);
/// g = [-2q, 1]
DenseVector lift_query(std::span<const double> q);

/// Mean of q q^T over the rows of `queries`.
DenseMatrix second_moment(const DenseMatrix& queries);

/// Builds C = psd_sqrt(G) and its pseudoinverse.
PairTransform make_transform(PairMode mode, std::size_t n, DenseMatrix g);

/// G = (1/Nq) sum_i q_i q_i^T.
PairTransform learn_scalar_transform(const DenseMatrix& queries);
/// G = (1/Nq) sum_i g_i g_i^T with g_i = [-2 q_i, 1].
PairTransform learn_sqdist_transform(const DenseMatrix& queries);

/// OPQ trained on transformed database vectors.
struct PairQModel {
    PairTransform transform;
    OPQModel opq;
    /// Squared-distance estimates add ||q||^2 at query time.
    bool query_norm_included = false;

    PairMode mode() const noexcept { return transform.mode; }
    CodeMatrix encode_all(const DenseMatrix& database) const;
};

PairQModel train_pairq(const PairTransform& transform, const DenseMatrix& database, const OPQParams& params);

/// r for the ADC tables, zero padded to the quantizer dimension.
DenseVector pairq_query_vector(const PairQModel& model, std::span<const double> q);

/// Per-query state: the scalar-product LUT over r plus the additive offset
/// (||q||^2 in squared-distance mode, 0 otherwise).
struct PairQuery {
    LookupTable lut;
    double offset = 0.0;
};

PairQuery prepare_query(const PairQModel& model, std::span<const double> q);
std::vector<double> estimate_all(const PairQuery& query, const CodeMatrix& codes);

/// r^T zhat for one code. Throws ModeMismatch in squared-distance mode.
double pairq_estimate_scalar(const PairQModel& model, std::span<const double> r,
                             std::span<const std::uint8_t> code);
/// ||q||^2 + r^T zhat; may be negative. Throws ModeMismatch in scalar mode.
double pairq_estimate_sqdist(const PairQModel& model, std::span<const double> q, std::span<const double> r,
                             std::span<const std::uint8_t> code);

}  // namespace pairq
