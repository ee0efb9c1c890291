#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace pairq::kernels {

/// Inner-loop kernels. Each ISA variant fills one table; callers go through
/// `active()` so the variant is picked once at runtime.
struct KernelTable {
    const char* name;
    double (*dot)(const double* a, const double* b, std::size_t d);
    double (*l2sqr)(const double* a, const double* b, std::size_t d);
    /// out[i] = ||x - ys[i]||^2 for ny row-major vectors of length d.
    void (*l2sqr_ny)(const double* x, const double* ys, std::size_t ny, std::size_t d, double* out);
    /// Index of the nearest of ny vectors, lowest index on ties.
    std::size_t (*argmin_l2)(const double* x, const double* ys, std::size_t ny, std::size_t d,
                             double* best_dist);
    /// out[i] = sum_j lut[j*k + codes[i*m + j]], accumulated in block order j = 0..m-1.
    void (*adc_scan)(const double* lut, std::size_t m, std::size_t k, const std::uint8_t* codes,
                     std::size_t n, double* out);
};

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa) noexcept;

const KernelTable& scalar_table() noexcept;
/// Null when the variant was not compiled in.
const KernelTable* avx2_table() noexcept;

/// True when the variant is compiled in and the CPU supports it.
bool available(Isa isa) noexcept;
const KernelTable& table(Isa isa);

/// Best available variant unless overridden by set_active() or the
/// PAIRQ_ISA environment variable ("scalar" or "avx2").
const KernelTable& active() noexcept;
Isa active_isa() noexcept;
void set_active(Isa isa);

}  // namespace pairq::kernels
