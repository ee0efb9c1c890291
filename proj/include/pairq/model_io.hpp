#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "pairq/estimator.hpp"
#include "pairq/opq.hpp"
#include "pairq/pair_transform.hpp"

namespace pairq::io {

/// Everything a "PAIRQ1" file can carry: an OPQ model, optionally preceded by
/// a pairwise transform and followed by a bias-correction table.
struct StoredModel {
    std::optional<PairTransform> transform;
    OPQModel opq;
    std::optional<MseTable> mse;
};

/// Layout, all integers little-endian int32 and all reals little-endian float32:
///   "PAIRQ1" | version | mode (0 plain, 1 scalar, 2 sqdist) | n | dim | M | K |
///   sub_dims[M] | flags (1 rotation, 2 transform, 4 mse table)
///   [transform: mode byte | n | m | C (m*m) | C_pinv (m*m)]
///   [rotation: dim*dim] | centroids (K*dim, block after block) | [mse: M*K]
std::vector<std::uint8_t> serialize_model(const StoredModel& model);
StoredModel deserialize_model(std::span<const std::uint8_t> bytes);

void save_model(const std::filesystem::path& path, const StoredModel& model);
StoredModel load_model(const std::filesystem::path& path);

StoredModel stored(const PairQModel& model);
PairQModel as_pairq(const StoredModel& model);

}  // namespace pairq::io
