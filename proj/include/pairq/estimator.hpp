#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pairq/matrix.hpp"
#include "pairq/opq.hpp"
#include "pairq/product_quantizer.hpp"

namespace pairq {

enum class LutKind { ScalarProduct, SquaredDistance };

/// Per-block, per-codeword partial values for one query (M x K).
struct LookupTable {
    std::size_t m = 0;
    std::size_t k = 0;
    LutKind kind = LutKind::ScalarProduct;
    std::vector<double> values;

    double at(std::size_t block, std::size_t word) const { return values[block * k + word]; }
};

/// Mean squared quantization error of the training points assigned to each
/// codeword, per block (M x K). Cells without training points hold the
/// fill value chosen by EmptyCellPolicy.
struct MseTable {
    std::size_t m = 0;
    std::size_t k = 0;
    std::vector<double> values;

    double at(std::size_t block, std::size_t word) const { return values[block * k + word]; }
};

enum class EmptyCellPolicy {
    Zero,          // empty cells contribute nothing
    BlockAverage,  // empty cells take the block's overall mean squared error
};

/// LUT[j][k] = <(R r)^(j), c^(j)_k>. `r` has length source_dim or dim.
LookupTable build_lut_scalar(const OPQModel& model, std::span<const double> r);

/// LUT[j][k] = ||(R q)^(j) - c^(j)_k||^2.
LookupTable build_lut_sqdist(const OPQModel& model, std::span<const double> q);

/// out[i] = sum_j lut[j][codes[i][j]], summed in block order.
std::vector<double> adc_scan(const LookupTable& lut, const CodeMatrix& codes);
void adc_scan_into(const LookupTable& lut, const CodeMatrix& codes, std::span<double> out);
double adc_estimate(const LookupTable& lut, std::span<const std::uint8_t> code);

MseTable compute_mse_table(const OPQModel& model, const DenseMatrix& training_data,
                           EmptyCellPolicy policy = EmptyCellPolicy::Zero);

/// sum_j mse[j][code_j]
double mse_correction(const MseTable& mse, std::span<const std::uint8_t> code);

/// estimate + sum_j mse[j][code_j]: the bias-corrected squared distance.
double corrected_sqdist(double estimate, std::span<const std::uint8_t> code, const MseTable& mse);

}  // namespace pairq
