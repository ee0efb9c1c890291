// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include "pairq/kernels.hpp"

namespace pairq::kernels {

namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d pair = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

inline double dot_avx2(const double* a, const double* b, std::size_t d) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= d; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    if (i + 4 <= d) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        i += 4;
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < d; ++i) s += a[i] * b[i];
    return s;
}

inline double l2sqr_avx2(const double* a, const double* b, std::size_t d) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= d; i += 8) {
        const __m256d t0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        const __m256d t1 = _mm256_sub_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4));
        acc0 = _mm256_fmadd_pd(t0, t0, acc0);
        acc1 = _mm256_fmadd_pd(t1, t1, acc1);
    }
    if (i + 4 <= d) {
        const __m256d t0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc0 = _mm256_fmadd_pd(t0, t0, acc0);
        i += 4;
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < d; ++i) {
        const double t = a[i] - b[i];
        s += t * t;
    }
    return s;
}

// Four candidate vectors at once, lanes = vectors; for short sub-vectors where
// a per-vector horizontal sum would dominate.
inline __m256d l2sqr_x4_short(const double* x, const double* ys, std::size_t d) {
    const __m256i offsets = _mm256_set_epi64x(3 * static_cast<long long>(d), 2 * static_cast<long long>(d),
                                              static_cast<long long>(d), 0);
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t t = 0; t < d; ++t) {
        const __m256d y = _mm256_i64gather_pd(ys + t, offsets, 8);
        const __m256d diff = _mm256_sub_pd(_mm256_set1_pd(x[t]), y);
        acc = _mm256_fmadd_pd(diff, diff, acc);
    }
    return acc;
}

void l2sqr_ny_avx2(const double* x, const double* ys, std::size_t ny, std::size_t d, double* out) {
    std::size_t i = 0;
    if (d < 8) {
        for (; i + 4 <= ny; i += 4) _mm256_storeu_pd(out + i, l2sqr_x4_short(x, ys + i * d, d));
    }
    for (; i < ny; ++i) out[i] = l2sqr_avx2(x, ys + i * d, d);
}

std::size_t argmin_l2_avx2(const double* x, const double* ys, std::size_t ny, std::size_t d,
                           double* best_dist) {
    constexpr std::size_t kChunk = 256;
    double dist[kChunk];
    std::size_t best = 0;
    double best_d = 0.0;
    for (std::size_t base = 0; base < ny; base += kChunk) {
        const std::size_t count = ny - base < kChunk ? ny - base : kChunk;
        l2sqr_ny_avx2(x, ys + base * d, count, d, dist);
        std::size_t start = 0;
        if (base == 0) {
            best_d = dist[0];
            start = 1;
        }
        for (std::size_t i = start; i < count; ++i) {
            if (dist[i] < best_d) {
                best_d = dist[i];
                best = base + i;
            }
        }
    }
    if (best_dist) *best_dist = best_d;
    return best;
}

// Same block-order summation as the scalar variant, four codes per step,
// so results are bit-identical to it.
void adc_scan_avx2(const double* lut, std::size_t m, std::size_t k, const std::uint8_t* codes,
                   std::size_t n, double* out) {
    // Eight codes per pass as two independent gather chains; each lane still
    // sums its own code in block order, so results match the scalar kernel.
    const std::size_t s = m;
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const std::uint8_t* c = codes + i * m;
        __m256d lo = _mm256_setzero_pd();
        __m256d hi = _mm256_setzero_pd();
        for (std::size_t j = 0; j < m; ++j) {
            const double* row = lut + j * k;
            const __m128i a = _mm_setr_epi32(c[j], c[s + j], c[2 * s + j], c[3 * s + j]);
            const __m128i b = _mm_setr_epi32(c[4 * s + j], c[5 * s + j], c[6 * s + j], c[7 * s + j]);
            lo = _mm256_add_pd(lo, _mm256_i32gather_pd(row, a, 8));
            hi = _mm256_add_pd(hi, _mm256_i32gather_pd(row, b, 8));
        }
        _mm256_storeu_pd(out + i, lo);
        _mm256_storeu_pd(out + i + 4, hi);
    }
    for (; i < n; ++i) {
        const std::uint8_t* code = codes + i * m;
        double acc = 0.0;
        for (std::size_t j = 0; j < m; ++j) acc += lut[j * k + code[j]];
        out[i] = acc;
    }
}

double dot_entry(const double* a, const double* b, std::size_t d) { return dot_avx2(a, b, d); }
double l2sqr_entry(const double* a, const double* b, std::size_t d) { return l2sqr_avx2(a, b, d); }

constexpr KernelTable kAvx2{
    "avx2", dot_entry, l2sqr_entry, l2sqr_ny_avx2, argmin_l2_avx2, adc_scan_avx2,
};

}  // namespace

const KernelTable* avx2_table_impl() noexcept { return &kAvx2; }

}  // namespace pairq::kernels
