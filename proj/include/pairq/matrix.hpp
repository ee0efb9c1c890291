#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace pairq {

using DenseVector = std::vector<double>;

/// Row-major dense matrix of doubles. Entries are finite on construction.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols);
    /// Takes ownership of `data`; throws if the length is not rows*cols or an entry is non-finite.
    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    static DenseMatrix identity(std::size_t n);
    static DenseMatrix diagonal(std::span<const double> diag);
    /// Builds a matrix from row vectors of equal length.
    static DenseMatrix from_rows(const std::vector<DenseVector>& rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }
    bool is_square() const noexcept { return rows_ == cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    double* data() noexcept { return data_.data(); }
    const double* data() const noexcept { return data_.data(); }
    const std::vector<double>& values() const noexcept { return data_; }

    DenseMatrix transposed() const;

    friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator*(double s, const DenseMatrix& a);

/// a * x
DenseVector matvec(const DenseMatrix& a, std::span<const double> x);
/// a^T * x
DenseVector matvec_transposed(const DenseMatrix& a, std::span<const double> x);
/// Rows of `points` mapped through `a`: out.row(i) = a * points.row(i).
DenseMatrix map_rows(const DenseMatrix& a, const DenseMatrix& points);

double frobenius_norm(const DenseMatrix& a);
double dot(std::span<const double> a, std::span<const double> b);
double squared_norm(std::span<const double> a);
double squared_distance(std::span<const double> a, std::span<const double> b);

/// Copy of `points` with columns zero-padded up to `cols`.
DenseMatrix pad_columns(const DenseMatrix& points, std::size_t cols);
/// Copy of `points` with every row scaled to unit L2 norm (zero rows kept).
DenseMatrix normalize_rows(const DenseMatrix& points);
/// Rows [begin, end).
DenseMatrix slice_rows(const DenseMatrix& points, std::size_t begin, std::size_t end);

}  // namespace pairq
