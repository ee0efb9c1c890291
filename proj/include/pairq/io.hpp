#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "pairq/matrix.hpp"
#include "pairq/product_quantizer.hpp"

namespace pairq::io {

/// fvecs payload as stored on disk, non-finite values included.
struct FloatRows {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<float> values;
};

/// Per record: little-endian int32 d, then d little-endian float32.
/// Empty file -> 0 rows. Throws Format on truncation or a record whose
/// dimension differs from the first one (the message names the record).
FloatRows read_fvecs_raw(const std::filesystem::path& path);

/// read_fvecs_raw converted to doubles. Non-finite values are reported on
/// stderr; since DenseMatrix cannot hold them this then throws NonFinite.
DenseMatrix read_fvecs(const std::filesystem::path& path);
void write_fvecs(const std::filesystem::path& path, const DenseMatrix& matrix);
void write_fvecs(const std::filesystem::path& path, const FloatRows& rows);

/// ivecs: int32 d, then d int32 per record.
std::vector<std::vector<std::int32_t>> read_ivecs(const std::filesystem::path& path);
void write_ivecs(const std::filesystem::path& path, const std::vector<std::vector<std::int32_t>>& rows);

/// bvecs: int32 d, then d uint8 per record. Used for PQ codes.
CodeMatrix read_bvecs(const std::filesystem::path& path);
void write_bvecs(const std::filesystem::path& path, const CodeMatrix& codes);

}  // namespace pairq::io
