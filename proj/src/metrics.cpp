#include "pairq/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "pairq/error.hpp"

namespace pairq {

double true_value(PairFunction f, std::span<const double> q, std::span<const double> x) {
    return f == PairFunction::ScalarProduct ? dot(q, x) : squared_distance(q, x);
}

namespace {

CodeMatrix gather_rows(const CodeMatrix& codes, std::span<const std::size_t> rows) {
    CodeMatrix out(rows.size(), codes.m);
    for (std::size_t t = 0; t < rows.size(); ++t) {
        const auto src = codes.row(rows[t]);
        std::copy(src.begin(), src.end(), out.row(t).begin());
    }
    return out;
}

bool is_identity_selection(const CodeMatrix& codes, std::span<const std::size_t> rows) {
    if (rows.size() != codes.count) return false;
    for (std::size_t t = 0; t < rows.size(); ++t)
        if (rows[t] != t) return false;
    return true;
}

}  // namespace

OpqEstimator::OpqEstimator(const OPQModel& model, PairFunction function, const MseTable* correction)
    : model_(&model), function_(function), correction_(correction) {
    if (correction_ && function_ != PairFunction::SquaredDistance) {
        throw Error(ErrorKind::ModeMismatch, "bias correction applies to squared distances only");
    }
}

std::string OpqEstimator::name() const { return correction_ ? "opq-bc" : "opq"; }

void OpqEstimator::estimate(std::span<const double> q, const CodeMatrix& codes, std::span<const std::size_t> rows,
                            std::span<double> out) const {
    const LookupTable lut = function_ == PairFunction::ScalarProduct ? build_lut_scalar(*model_, q)
                                                                     : build_lut_sqdist(*model_, q);
    if (is_identity_selection(codes, rows)) {
        adc_scan_into(lut, codes, out);
    } else {
        adc_scan_into(lut, gather_rows(codes, rows), out);
    }
    if (correction_) {
        for (std::size_t t = 0; t < rows.size(); ++t) out[t] += mse_correction(*correction_, codes.row(rows[t]));
    }
}

PairQEstimator::PairQEstimator(const PairQModel& model) : model_(&model) {}

void PairQEstimator::estimate(std::span<const double> q, const CodeMatrix& codes, std::span<const std::size_t> rows,
                              std::span<double> out) const {
    const PairQuery query = prepare_query(*model_, q);
    if (is_identity_selection(codes, rows)) {
        adc_scan_into(query.lut, codes, out);
    } else {
        adc_scan_into(query.lut, gather_rows(codes, rows), out);
    }
    if (query.offset != 0.0) {
        for (double& v : out) v += query.offset;
    }
}

namespace {

// Neumaier summation; bias sums cancel heavily over millions of pairs.
class CompensatedSum {
public:
    void add(double v) {
        const double t = sum_ + v;
        comp_ += std::abs(sum_) >= std::abs(v) ? (sum_ - t) + v : (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace

MetricSummary evaluate_pairs(const PairEstimator& est, PairFunction f, const DenseMatrix& queries,
                             const DenseMatrix& database, const CodeMatrix& codes, const PairSampling& sampling) {
    if (codes.count != database.rows()) {
        throw Error(ErrorKind::DimensionMismatch, "codes for " + std::to_string(codes.count) + " vectors, database has " +
                                                      std::to_string(database.rows()));
    }
    if (queries.rows() > 0 && database.rows() > 0 && queries.cols() != database.cols()) {
        throw Error(ErrorKind::DimensionMismatch, "query and database dimensions differ");
    }
    MetricSummary s;
    const std::size_t nq = queries.rows();
    const std::size_t nx = database.rows();
    if (nq == 0 || nx == 0) return s;

    const bool all_pairs = nq * nx <= sampling.max_pairs;
    const std::size_t per_query = all_pairs ? nx : std::min(nx, (sampling.max_pairs + nq - 1) / nq);
    std::vector<std::size_t> pool(nx);
    std::iota(pool.begin(), pool.end(), 0);
    std::mt19937_64 rng(sampling.seed);
    std::vector<std::size_t> rows(per_query);
    std::vector<double> estimates(per_query);

    CompensatedSum sq_sum, rel_sum, signed_sum;
    std::size_t rel_count = 0;
    for (std::size_t i = 0; i < nq; ++i) {
        if (all_pairs) {
            std::iota(rows.begin(), rows.end(), 0);
        } else {
            // Partial Fisher-Yates: the first per_query entries become a uniform subset.
            for (std::size_t t = 0; t < per_query; ++t) {
                const std::size_t j = std::uniform_int_distribution<std::size_t>(t, nx - 1)(rng);
                std::swap(pool[t], pool[j]);
                rows[t] = pool[t];
            }
        }
        const auto q = queries.row(i);
        est.estimate(q, codes, rows, estimates);
        for (std::size_t t = 0; t < per_query; ++t) {
            const double truth = true_value(f, q, database.row(rows[t]));
            const double err = truth - estimates[t];
            sq_sum.add(err * err);
            signed_sum.add(err);
            if (f == PairFunction::SquaredDistance) {
                if (truth < 1e-12) {
                    ++s.excluded_pairs;
                } else {
                    rel_sum.add(std::abs(err) / truth);
                    ++rel_count;
                }
            }
        }
    }
    s.pairs = nq * per_query;
    s.mse = sq_sum.value() / static_cast<double>(s.pairs);
    s.bias = signed_sum.value() / static_cast<double>(s.pairs);
    s.relative_error = rel_count ? rel_sum.value() / static_cast<double>(rel_count) : 0.0;
    return s;
}

double eval_scalar_mse(const PairEstimator& est, const DenseMatrix& queries, const DenseMatrix& database,
                       const CodeMatrix& codes, const PairSampling& sampling) {
    return evaluate_pairs(est, PairFunction::ScalarProduct, queries, database, codes, sampling).mse;
}

RelativeError eval_relative_dist_error(const PairEstimator& est, const DenseMatrix& queries,
                                       const DenseMatrix& database, const CodeMatrix& codes,
                                       const PairSampling& sampling) {
    const auto s = evaluate_pairs(est, PairFunction::SquaredDistance, queries, database, codes, sampling);
    return {s.relative_error, s.excluded_pairs};
}

double eval_bias(const PairEstimator& est, PairFunction f, const DenseMatrix& queries, const DenseMatrix& database,
                 const CodeMatrix& codes, const PairSampling& sampling) {
    return evaluate_pairs(est, f, queries, database, codes, sampling).bias;
}

}  // namespace pairq
