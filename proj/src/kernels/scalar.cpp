#include "pairq/kernels.hpp"

namespace pairq::kernels {

namespace {

double dot_scalar(const double* a, const double* b, std::size_t d) {
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i) s += a[i] * b[i];
    return s;
}

double l2sqr_scalar(const double* a, const double* b, std::size_t d) {
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        const double t = a[i] - b[i];
        s += t * t;
    }
    return s;
}

void l2sqr_ny_scalar(const double* x, const double* ys, std::size_t ny, std::size_t d, double* out) {
    for (std::size_t i = 0; i < ny; ++i) out[i] = l2sqr_scalar(x, ys + i * d, d);
}

std::size_t argmin_l2_scalar(const double* x, const double* ys, std::size_t ny, std::size_t d,
                             double* best_dist) {
    std::size_t best = 0;
    double best_d = l2sqr_scalar(x, ys, d);
    for (std::size_t i = 1; i < ny; ++i) {
        const double dist = l2sqr_scalar(x, ys + i * d, d);
        if (dist < best_d) {
            best_d = dist;
            best = i;
        }
    }
    if (best_dist) *best_dist = best_d;
    return best;
}

void adc_scan_scalar(const double* lut, std::size_t m, std::size_t k, const std::uint8_t* codes,
                     std::size_t n, double* out) {
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint8_t* code = codes + i * m;
        double s = 0.0;
        for (std::size_t j = 0; j < m; ++j) s += lut[j * k + code[j]];
        out[i] = s;
    }
}

constexpr KernelTable kScalar{
    "scalar", dot_scalar, l2sqr_scalar, l2sqr_ny_scalar, argmin_l2_scalar, adc_scan_scalar,
};

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

}  // namespace pairq::kernels
