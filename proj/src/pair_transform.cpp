#include "pairq/pair_transform.hpp"

#include <string>

#include "pairq/error.hpp"
#include "pairq/linalg.hpp"

namespace pairq {

const char* to_string(PairMode mode) noexcept {
    return mode == PairMode::ScalarProduct ? "scalar" : "sqdist";
}

DenseVector lift_point(std::span<const double> x) {
    DenseVector y(x.begin(), x.end());
    y.push_back(squared_norm(x));
    return y;
}

DenseVector lift_query(std::span<const double> q) {
    DenseVector g(q.size() + 1);
    for (std::size_t i = 0; i < q.size(); ++i) g[i] = -2.0 * q[i];
    g[q.size()] = 1.0;
    return g;
}

DenseMatrix second_moment(const DenseMatrix& queries) {
    if (queries.rows() == 0) throw Error(ErrorKind::InvalidArgument, "empty query set");
    const std::size_t n = queries.cols();
    DenseMatrix g(n, n);
    for (std::size_t i = 0; i < queries.rows(); ++i) {
        const double* q = queries.row(i).data();
        for (std::size_t a = 0; a < n; ++a) {
            const double qa = q[a];
            double* dst = g.row(a).data();
            for (std::size_t b = a; b < n; ++b) dst[b] += qa * q[b];
        }
    }
    const double count = static_cast<double>(queries.rows());
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a; b < n; ++b) {
            g(a, b) /= count;
            g(b, a) = g(a, b);
        }
    }
    return g;
}

PairTransform make_transform(PairMode mode, std::size_t n, DenseMatrix g) {
    const std::size_t m = mode == PairMode::ScalarProduct ? n : n + 1;
    if (g.rows() != m || g.cols() != m) {
        throw Error(ErrorKind::DimensionMismatch, "G must be " + std::to_string(m) + "x" + std::to_string(m));
    }
    PairTransform t;
    t.mode = mode;
    t.n = n;
    t.m = m;
    t.c = psd_sqrt(g);
    t.c_pinv = pseudo_inverse(t.c);
    t.g = std::move(g);
    return t;
}

PairTransform learn_scalar_transform(const DenseMatrix& queries) {
    return make_transform(PairMode::ScalarProduct, queries.cols(), second_moment(queries));
}

PairTransform learn_sqdist_transform(const DenseMatrix& queries) {
    if (queries.rows() == 0) throw Error(ErrorKind::InvalidArgument, "empty query set");
    DenseMatrix lifted(queries.rows(), queries.cols() + 1);
    for (std::size_t i = 0; i < queries.rows(); ++i) {
        const DenseVector g = lift_query(queries.row(i));
        std::copy(g.begin(), g.end(), lifted.row(i).begin());
    }
    return make_transform(PairMode::SquaredDistance, queries.cols(), second_moment(lifted));
}

DenseVector PairTransform::map(std::span<const double> x) const {
    if (x.size() != n) {
        throw Error(ErrorKind::DimensionMismatch, "transform expects length " + std::to_string(n) + ", got " +
                                                      std::to_string(x.size()));
    }
    if (mode == PairMode::ScalarProduct) return matvec(c, x);
    return matvec(c, lift_point(x));
}

DenseMatrix PairTransform::map_all(const DenseMatrix& database) const {
    if (database.cols() != n) {
        throw Error(ErrorKind::DimensionMismatch, "database dimension " + std::to_string(database.cols()) +
                                                      " vs transform " + std::to_string(n));
    }
    if (mode == PairMode::ScalarProduct) return map_rows(c, database);
    DenseMatrix lifted(database.rows(), m);
    for (std::size_t i = 0; i < database.rows(); ++i) {
        const DenseVector y = lift_point(database.row(i));
        std::copy(y.begin(), y.end(), lifted.row(i).begin());
    }
    return map_rows(c, lifted);
}

DenseVector PairTransform::query_vector(std::span<const double> q) const {
    if (q.size() != n) {
        throw Error(ErrorKind::DimensionMismatch, "query has length " + std::to_string(q.size()) +
                                                      ", expected " + std::to_string(n));
    }
    if (mode == PairMode::ScalarProduct) return matvec_transposed(c_pinv, q);
    return matvec_transposed(c_pinv, lift_query(q));
}

CodeMatrix PairQModel::encode_all(const DenseMatrix& database) const {
    return opq.encode_all(transform.map_all(database));
}

PairQModel train_pairq(const PairTransform& transform, const DenseMatrix& database, const OPQParams& params) {
    PairQModel model;
    model.transform = transform;
    model.opq = train_opq(transform.map_all(database), params);
    model.query_norm_included = transform.mode == PairMode::SquaredDistance;
    return model;
}

DenseVector pairq_query_vector(const PairQModel& model, std::span<const double> q) {
    DenseVector r = model.transform.query_vector(q);
    r.resize(model.opq.dim(), 0.0);
    return r;
}

PairQuery prepare_query(const PairQModel& model, std::span<const double> q) {
    PairQuery out;
    out.lut = build_lut_scalar(model.opq, pairq_query_vector(model, q));
    out.offset = model.query_norm_included ? squared_norm(q) : 0.0;
    return out;
}

std::vector<double> estimate_all(const PairQuery& query, const CodeMatrix& codes) {
    std::vector<double> out = adc_scan(query.lut, codes);
    if (query.offset != 0.0) {
        for (double& v : out) v += query.offset;
    }
    return out;
}

double pairq_estimate_scalar(const PairQModel& model, std::span<const double> r,
                             std::span<const std::uint8_t> code) {
    if (model.mode() != PairMode::ScalarProduct) {
        throw Error(ErrorKind::ModeMismatch, "scalar estimate on a squared-distance model");
    }
    return adc_estimate(build_lut_scalar(model.opq, r), code);
}

double pairq_estimate_sqdist(const PairQModel& model, std::span<const double> q, std::span<const double> r,
                             std::span<const std::uint8_t> code) {
    if (model.mode() != PairMode::SquaredDistance) {
        throw Error(ErrorKind::ModeMismatch, "squared-distance estimate on a scalar-product model");
    }
    return squared_norm(q) + adc_estimate(build_lut_scalar(model.opq, r), code);
}

}  // namespace pairq
