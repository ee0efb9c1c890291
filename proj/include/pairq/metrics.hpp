#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "pairq/estimator.hpp"
#include "pairq/matrix.hpp"
#include "pairq/opq.hpp"
#include "pairq/pair_transform.hpp"

namespace pairq {

/// The exact pairwise function an estimator approximates.
enum class PairFunction { ScalarProduct, SquaredDistance };

double true_value(PairFunction f, std::span<const double> q, std::span<const double> x);

/// Estimates f(q, x_i) for selected rows of a coded database.
class PairEstimator {
public:
    virtual ~PairEstimator() = default;
    virtual std::string name() const = 0;
    /// out[t] = estimate for database row rows[t].
    virtual void estimate(std::span<const double> q, const CodeMatrix& codes, std::span<const std::size_t> rows,
                          std::span<double> out) const = 0;
};

/// Plain ADC over an OPQ model; with an MSE table in squared-distance
/// mode this is the bias-corrected estimator.
class OpqEstimator final : public PairEstimator {
public:
    OpqEstimator(const OPQModel& model, PairFunction function, const MseTable* correction = nullptr);
    std::string name() const override;
    void estimate(std::span<const double> q, const CodeMatrix& codes, std::span<const std::size_t> rows,
                  std::span<double> out) const override;

private:
    const OPQModel* model_;
    PairFunction function_;
    const MseTable* correction_;
};

class PairQEstimator final : public PairEstimator {
public:
    explicit PairQEstimator(const PairQModel& model);
    std::string name() const override { return "pairq"; }
    void estimate(std::span<const double> q, const CodeMatrix& codes, std::span<const std::size_t> rows,
                  std::span<double> out) const override;

private:
    const PairQModel* model_;
};

/// All pairs up to max_pairs; beyond that each query gets a seeded random
/// subset of ceil(max_pairs / Nq) database rows.
struct PairSampling {
    std::size_t max_pairs = 10'000'000;
    std::uint64_t seed = 0;
};

struct MetricSummary {
    double mse = 0.0;                // mean (f - est)^2
    double relative_error = 0.0;     // mean |f - est| / f over pairs with f >= 1e-12
    double bias = 0.0;               // mean (f - est)
    std::size_t pairs = 0;
    std::size_t excluded_pairs = 0;  // pairs skipped by the relative error
};

MetricSummary evaluate_pairs(const PairEstimator& est, PairFunction f, const DenseMatrix& queries,
                             const DenseMatrix& database, const CodeMatrix& codes, const PairSampling& sampling = {});

/// Mean squared error of scalar-product estimates.
double eval_scalar_mse(const PairEstimator& est, const DenseMatrix& queries, const DenseMatrix& database,
                       const CodeMatrix& codes, const PairSampling& sampling = {});

struct RelativeError {
    double mean = 0.0;
    std::size_t excluded = 0;
};

/// Mean |d2 - est| / d2 of squared-distance estimates; pairs with d2 < 1e-12 are excluded and counted.
RelativeError eval_relative_dist_error(const PairEstimator& est, const DenseMatrix& queries,
                                       const DenseMatrix& database, const CodeMatrix& codes,
                                       const PairSampling& sampling = {});

/// Mean signed error (true - estimate).
double eval_bias(const PairEstimator& est, PairFunction f, const DenseMatrix& queries, const DenseMatrix& database,
                 const CodeMatrix& codes, const PairSampling& sampling = {});

}  // namespace pairq
