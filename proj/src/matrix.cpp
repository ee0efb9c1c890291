#include "pairq/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pairq/error.hpp"

namespace pairq {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "invalid argument";
        case ErrorKind::DimensionMismatch: return "dimension mismatch";
        case ErrorKind::NotSymmetric: return "not symmetric";
        case ErrorKind::NotPositiveSemidefinite: return "not positive semidefinite";
        case ErrorKind::OutOfRange: return "out of range";
        case ErrorKind::ModeMismatch: return "mode mismatch";
        case ErrorKind::NonFinite: return "non-finite value";
        case ErrorKind::Io: return "i/o error";
        case ErrorKind::Format: return "format error";
    }
    return "error";
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
        throw Error(ErrorKind::DimensionMismatch,
                    "matrix data length " + std::to_string(data_.size()) + " != " +
                        std::to_string(rows_) + "x" + std::to_string(cols_));
    }
    for (std::size_t i = 0; i < data_.size(); ++i) {
        if (!std::isfinite(data_[i])) {
            throw Error(ErrorKind::NonFinite, "matrix entry (" + std::to_string(i / cols_) + ", " +
                                                  std::to_string(i % cols_) + ")");
        }
    }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

DenseMatrix DenseMatrix::diagonal(std::span<const double> diag) {
    DenseMatrix m(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
}

DenseMatrix DenseMatrix::from_rows(const std::vector<DenseVector>& rows) {
    if (rows.empty()) return {};
    const std::size_t cols = rows.front().size();
    std::vector<double> data;
    data.reserve(rows.size() * cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols) {
            throw Error(ErrorKind::DimensionMismatch, "row " + std::to_string(r) + " has length " +
                                                          std::to_string(rows[r].size()) +
                                                          ", expected " + std::to_string(cols));
        }
        data.insert(data.end(), rows[r].begin(), rows[r].end());
    }
    return DenseMatrix(rows.size(), cols, std::move(data));
}

DenseMatrix DenseMatrix::transposed() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) {
        throw Error(ErrorKind::DimensionMismatch, "matmul " + std::to_string(a.rows()) + "x" +
                                                      std::to_string(a.cols()) + " * " +
                                                      std::to_string(b.rows()) + "x" +
                                                      std::to_string(b.cols()));
    }
    DenseMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double* dst = out.row(i).data();
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            const double* src = b.row(k).data();
            for (std::size_t j = 0; j < b.cols(); ++j) dst[j] += aik * src[j];
        }
    }
    return out;
}

namespace {
void require_same_shape(const DenseMatrix& a, const DenseMatrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw Error(ErrorKind::DimensionMismatch, std::string(op) + " of differently shaped matrices");
    }
}
}  // namespace

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
    require_same_shape(a, b, "subtraction");
    DenseMatrix out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] -= b.data()[i];
    return out;
}

DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b) {
    require_same_shape(a, b, "addition");
    DenseMatrix out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] += b.data()[i];
    return out;
}

DenseMatrix operator*(double s, const DenseMatrix& a) {
    DenseMatrix out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] *= s;
    return out;
}

DenseVector matvec(const DenseMatrix& a, std::span<const double> x) {
    if (a.cols() != x.size()) {
        throw Error(ErrorKind::DimensionMismatch, "matvec expects length " + std::to_string(a.cols()) +
                                                      ", got " + std::to_string(x.size()));
    }
    DenseVector out(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) out[i] = dot(a.row(i), x);
    return out;
}

DenseVector matvec_transposed(const DenseMatrix& a, std::span<const double> x) {
    if (a.rows() != x.size()) {
        throw Error(ErrorKind::DimensionMismatch, "transposed matvec expects length " +
                                                      std::to_string(a.rows()) + ", got " +
                                                      std::to_string(x.size()));
    }
    DenseVector out(a.cols(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const auto row = a.row(i);
        for (std::size_t j = 0; j < a.cols(); ++j) out[j] += row[j] * x[i];
    }
    return out;
}

DenseMatrix map_rows(const DenseMatrix& a, const DenseMatrix& points) {
    if (a.cols() != points.cols()) {
        throw Error(ErrorKind::DimensionMismatch, "map_rows: transform has " +
                                                      std::to_string(a.cols()) + " columns, points have " +
                                                      std::to_string(points.cols()));
    }
    DenseMatrix out(points.rows(), a.rows());
    for (std::size_t p = 0; p < points.rows(); ++p) {
        const auto x = points.row(p);
        auto dst = out.row(p);
        for (std::size_t i = 0; i < a.rows(); ++i) dst[i] = dot(a.row(i), x);
    }
    return out;
}

double frobenius_norm(const DenseMatrix& a) {
    double s = 0.0;
    for (double v : a.values()) s += v * v;
    return std::sqrt(s);
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double squared_norm(std::span<const double> a) { return dot(a, a); }

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

DenseMatrix pad_columns(const DenseMatrix& points, std::size_t cols) {
    if (cols < points.cols()) {
        throw Error(ErrorKind::InvalidArgument, "cannot pad to fewer columns");
    }
    if (cols == points.cols()) return points;
    DenseMatrix out(points.rows(), cols);
    for (std::size_t r = 0; r < points.rows(); ++r) {
        const auto src = points.row(r);
        std::copy(src.begin(), src.end(), out.row(r).begin());
    }
    return out;
}

DenseMatrix normalize_rows(const DenseMatrix& points) {
    DenseMatrix out = points;
    for (std::size_t r = 0; r < out.rows(); ++r) {
        auto row = out.row(r);
        const double norm = std::sqrt(squared_norm(row));
        if (norm == 0.0) continue;
        for (double& v : row) v /= norm;
    }
    return out;
}

DenseMatrix slice_rows(const DenseMatrix& points, std::size_t begin, std::size_t end) {
    if (begin > end || end > points.rows()) {
        throw Error(ErrorKind::OutOfRange, "row slice [" + std::to_string(begin) + ", " +
                                               std::to_string(end) + ") of " +
                                               std::to_string(points.rows()) + " rows");
    }
    DenseMatrix out(end - begin, points.cols());
    std::copy(points.data() + begin * points.cols(), points.data() + end * points.cols(), out.data());
    return out;
}

}  // namespace pairq
