#include "pairq/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "pairq/error.hpp"

namespace pairq {

namespace {

constexpr int kMaxSweeps = 100;

void require_square(const DenseMatrix& a, const char* op) {
    if (!a.is_square()) {
        throw Error(ErrorKind::DimensionMismatch, std::string(op) + " needs a square matrix, got " +
                                                      std::to_string(a.rows()) + "x" +
                                                      std::to_string(a.cols()));
    }
}

// Jacobi rotation parameter t = tan(theta) for the 2x2 problem with
// cot(2 theta) = zeta, choosing the smaller rotation angle.
double jacobi_tangent(double zeta) {
    if (std::abs(zeta) > 1e150) return 0.5 / zeta;
    const double t = 1.0 / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
    return zeta >= 0.0 ? t : -t;
}

// Permutation sorting `values` in descending order, stable.
std::vector<std::size_t> descending_order(const std::vector<double>& values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    return order;
}

DenseMatrix permute_columns(const DenseMatrix& m, const std::vector<std::size_t>& order) {
    DenseMatrix out(m.rows(), order.size());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < order.size(); ++c) out(r, c) = m(r, order[c]);
    return out;
}

// Replaces the listed zero columns of a square matrix whose other columns are
// orthonormal by unit vectors completing an orthonormal basis.
void complete_orthonormal_columns(DenseMatrix& u, const std::vector<std::size_t>& zero_cols) {
    const std::size_t n = u.rows();
    std::vector<bool> filled(u.cols(), true);
    for (std::size_t c : zero_cols) filled[c] = false;
    std::size_t candidate = 0;
    for (std::size_t c : zero_cols) {
        DenseVector v(n);
        for (; candidate < n; ++candidate) {
            std::fill(v.begin(), v.end(), 0.0);
            v[candidate] = 1.0;
            for (int pass = 0; pass < 2; ++pass) {
                for (std::size_t k = 0; k < u.cols(); ++k) {
                    if (!filled[k]) continue;
                    double proj = 0.0;
                    for (std::size_t i = 0; i < n; ++i) proj += u(i, k) * v[i];
                    for (std::size_t i = 0; i < n; ++i) v[i] -= proj * u(i, k);
                }
            }
            if (squared_norm(v) > 0.25) break;
        }
        ++candidate;
        const double norm = std::sqrt(squared_norm(v));
        for (std::size_t i = 0; i < n; ++i) u(i, c) = v[i] / norm;
        filled[c] = true;
    }
}

}  // namespace

SymEig sym_eig(const DenseMatrix& input) {
    require_square(input, "sym_eig");
    const std::size_t n = input.rows();
    const double norm = frobenius_norm(input);
    double asym = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) asym = std::max(asym, std::abs(input(i, j) - input(j, i)));
    if (asym > 1e-10 * norm) {
        throw Error(ErrorKind::NotSymmetric, "max |A_ij - A_ji| = " + std::to_string(asym));
    }

    DenseMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (input(i, j) + input(j, i));
    DenseMatrix v = DenseMatrix::identity(n);

    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double app = a(p, p);
                const double aqq = a(q, q);
                // Off-diagonal entry negligible next to both diagonal entries.
                const double g = 100.0 * std::abs(apq);
                if (std::abs(app) + g == std::abs(app) && std::abs(aqq) + g == std::abs(aqq)) {
                    a(p, q) = 0.0;
                    a(q, p) = 0.0;
                    continue;
                }
                rotated = true;
                const double t = jacobi_tangent((aqq - app) / (2.0 * apq));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
        if (!rotated) break;
    }

    std::vector<double> diag(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = a(i, i);
    const auto order = descending_order(diag);
    SymEig out;
    out.eigenvalues.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.eigenvalues[i] = diag[order[i]];
    out.eigenvectors = permute_columns(v, order);
    return out;
}

Svd svd(const DenseMatrix& a) {
    if (a.rows() < a.cols()) {
        Svd t = svd(a.transposed());
        return Svd{std::move(t.v), std::move(t.singular_values), std::move(t.u)};
    }
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    // Column-major working copies make the column rotations contiguous.
    std::vector<double> u(m * n);
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < n; ++c) u[c * m + r] = a(r, c);
    std::vector<double> v(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double* up = &u[p * m];
                double* uq = &u[q * m];
                double alpha = 0.0, beta = 0.0, gamma = 0.0;
                for (std::size_t i = 0; i < m; ++i) {
                    alpha += up[i] * up[i];
                    beta += uq[i] * uq[i];
                    gamma += up[i] * uq[i];
                }
                if (gamma == 0.0 || std::abs(gamma) <= 1e-15 * std::sqrt(alpha * beta)) continue;
                rotated = true;
                const double t = jacobi_tangent((beta - alpha) / (2.0 * gamma));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (std::size_t i = 0; i < m; ++i) {
                    const double x = up[i];
                    const double y = uq[i];
                    up[i] = c * x - s * y;
                    uq[i] = s * x + c * y;
                }
                double* vp = &v[p * n];
                double* vq = &v[q * n];
                for (std::size_t i = 0; i < n; ++i) {
                    const double x = vp[i];
                    const double y = vq[i];
                    vp[i] = c * x - s * y;
                    vq[i] = s * x + c * y;
                }
            }
        }
        if (!rotated) break;
    }

    std::vector<double> sigma(n);
    for (std::size_t c = 0; c < n; ++c) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) s += u[c * m + i] * u[c * m + i];
        sigma[c] = std::sqrt(s);
    }
    const auto order = descending_order(sigma);
    Svd out{DenseMatrix(m, n), std::vector<double>(n), DenseMatrix(n, n)};
    std::vector<std::size_t> zero_cols;
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t c = order[k];
        out.singular_values[k] = sigma[c];
        if (sigma[c] > 1e-150) {
            for (std::size_t i = 0; i < m; ++i) out.u(i, k) = u[c * m + i] / sigma[c];
        } else {
            zero_cols.push_back(k);
        }
        for (std::size_t i = 0; i < n; ++i) out.v(i, k) = v[c * n + i];
    }
    if (!zero_cols.empty() && m == n) complete_orthonormal_columns(out.u, zero_cols);
    return out;
}

DenseMatrix psd_sqrt(const DenseMatrix& g) {
    const SymEig eig = sym_eig(g);
    const std::size_t n = g.rows();
    if (n == 0) return {};
    const double lambda_max = std::max(eig.eigenvalues.front(), 0.0);
    std::vector<double> root(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double lambda = eig.eigenvalues[i];
        if (lambda < -1e-6 * lambda_max || (lambda < 0.0 && lambda_max == 0.0)) {
            throw Error(ErrorKind::NotPositiveSemidefinite,
                        "eigenvalue " + std::to_string(lambda) + " with lambda_max " +
                            std::to_string(lambda_max));
        }
        root[i] = lambda <= 1e-10 * lambda_max ? 0.0 : std::sqrt(lambda);
    }
    const DenseMatrix& v = eig.eigenvectors;
    DenseMatrix c(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                if (root[k] != 0.0) s += v(i, k) * root[k] * v(j, k);
            }
            c(i, j) = s;
            c(j, i) = s;
        }
    }
    return c;
}

DenseMatrix pseudo_inverse(const DenseMatrix& c) {
    if (c.empty()) return DenseMatrix(c.cols(), c.rows());
    const Svd d = svd(c);
    const double sigma_max = d.singular_values.front();
    DenseMatrix out(c.cols(), c.rows());
    for (std::size_t k = 0; k < d.singular_values.size(); ++k) {
        const double sigma = d.singular_values[k];
        if (sigma <= 1e-10 * sigma_max || sigma == 0.0) continue;
        const double inv = 1.0 / sigma;
        for (std::size_t i = 0; i < out.rows(); ++i) {
            const double vi = d.v(i, k) * inv;
            if (vi == 0.0) continue;
            for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) += vi * d.u(j, k);
        }
    }
    return out;
}

DenseMatrix orthogonal_polar(const DenseMatrix& m) {
    require_square(m, "orthogonal_polar");
    const Svd d = svd(m);
    return d.u * d.v.transposed();
}

DenseMatrix procrustes(const DenseMatrix& x, const DenseMatrix& y) {
    if (x.rows() != y.rows() || x.cols() != y.cols()) {
        throw Error(ErrorKind::DimensionMismatch, "procrustes operands " + std::to_string(x.rows()) +
                                                      "x" + std::to_string(x.cols()) + " and " +
                                                      std::to_string(y.rows()) + "x" +
                                                      std::to_string(y.cols()));
    }
    return orthogonal_polar(y * x.transposed());
}

double orthogonality_error(const DenseMatrix& a) {
    DenseMatrix gram = a.transposed() * a;
    for (std::size_t i = 0; i < gram.rows(); ++i) gram(i, i) -= 1.0;
    return frobenius_norm(gram);
}

}  // namespace pairq
