#include "pairq/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iostream>
#include <iterator>
#include <string>

#include "pairq/error.hpp"

namespace pairq::io {

namespace {

std::vector<char> slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
    return std::vector<char>(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void spit(const std::filesystem::path& path, const std::vector<char>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorKind::Io, "write failed: " + path.string());
}

template <typename T>
T load_le(const char* p) {
    T v;
    std::memcpy(&v, p, sizeof(T));
    if constexpr (std::endian::native == std::endian::big && sizeof(T) > 1) {
        auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
        std::reverse(bytes.begin(), bytes.end());
        v = std::bit_cast<T>(bytes);
    }
    return v;
}

template <typename T>
void store_le(std::vector<char>& out, T v) {
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big && sizeof(T) > 1) std::reverse(buf, buf + sizeof(T));
    out.insert(out.end(), buf, buf + sizeof(T));
}

// Walks a *vecs buffer, calling `record(index, payload, d)` per record.
template <typename Elem, typename F>
std::size_t walk_records(const std::vector<char>& bytes, const std::filesystem::path& path, F&& record) {
    std::size_t pos = 0;
    std::size_t index = 0;
    std::int32_t first_d = -1;
    while (pos < bytes.size()) {
        if (bytes.size() - pos < 4) {
            throw Error(ErrorKind::Format, path.string() + ": truncated header in record " + std::to_string(index));
        }
        const auto d = load_le<std::int32_t>(bytes.data() + pos);
        pos += 4;
        if (d < 0) {
            throw Error(ErrorKind::Format, path.string() + ": negative dimension in record " + std::to_string(index));
        }
        if (first_d < 0) {
            first_d = d;
        } else if (d != first_d) {
            throw Error(ErrorKind::Format, path.string() + ": record " + std::to_string(index) + " has dimension " +
                                               std::to_string(d) + ", expected " + std::to_string(first_d));
        }
        const std::size_t payload = static_cast<std::size_t>(d) * sizeof(Elem);
        if (bytes.size() - pos < payload) {
            throw Error(ErrorKind::Format, path.string() + ": truncated payload in record " + std::to_string(index));
        }
        record(index, bytes.data() + pos, static_cast<std::size_t>(d));
        pos += payload;
        ++index;
    }
    return first_d < 0 ? 0 : static_cast<std::size_t>(first_d);
}

}  // namespace

FloatRows read_fvecs_raw(const std::filesystem::path& path) {
    const auto bytes = slurp(path);
    FloatRows out;
    out.cols = walk_records<float>(bytes, path, [&](std::size_t, const char* p, std::size_t d) {
        for (std::size_t i = 0; i < d; ++i) out.values.push_back(load_le<float>(p + 4 * i));
        ++out.rows;
    });
    return out;
}

DenseMatrix read_fvecs(const std::filesystem::path& path) {
    const FloatRows raw = read_fvecs_raw(path);
    if (raw.rows == 0) return {};
    std::vector<double> values(raw.values.begin(), raw.values.end());
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            std::cerr << "warning: " << path.string() << ": non-finite value in record " << i / raw.cols << "\n";
            throw Error(ErrorKind::NonFinite, path.string() + ": record " + std::to_string(i / raw.cols));
        }
    }
    return DenseMatrix(raw.rows, raw.cols, std::move(values));
}

void write_fvecs(const std::filesystem::path& path, const FloatRows& rows) {
    std::vector<char> bytes;
    bytes.reserve(rows.rows * (4 + 4 * rows.cols));
    for (std::size_t r = 0; r < rows.rows; ++r) {
        store_le<std::int32_t>(bytes, static_cast<std::int32_t>(rows.cols));
        for (std::size_t c = 0; c < rows.cols; ++c) store_le<float>(bytes, rows.values[r * rows.cols + c]);
    }
    spit(path, bytes);
}

void write_fvecs(const std::filesystem::path& path, const DenseMatrix& matrix) {
    FloatRows rows{matrix.rows(), matrix.cols(), std::vector<float>(matrix.values().begin(), matrix.values().end())};
    write_fvecs(path, rows);
}

std::vector<std::vector<std::int32_t>> read_ivecs(const std::filesystem::path& path) {
    const auto bytes = slurp(path);
    std::vector<std::vector<std::int32_t>> out;
    walk_records<std::int32_t>(bytes, path, [&](std::size_t, const char* p, std::size_t d) {
        std::vector<std::int32_t> row(d);
        for (std::size_t i = 0; i < d; ++i) row[i] = load_le<std::int32_t>(p + 4 * i);
        out.push_back(std::move(row));
    });
    return out;
}

void write_ivecs(const std::filesystem::path& path, const std::vector<std::vector<std::int32_t>>& rows) {
    std::vector<char> bytes;
    for (const auto& row : rows) {
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw Error(ErrorKind::DimensionMismatch, "ivecs rows must share a dimension");
        }
        store_le<std::int32_t>(bytes, static_cast<std::int32_t>(row.size()));
        for (std::int32_t v : row) store_le<std::int32_t>(bytes, v);
    }
    spit(path, bytes);
}

CodeMatrix read_bvecs(const std::filesystem::path& path) {
    const auto bytes = slurp(path);
    std::vector<std::uint8_t> data;
    std::size_t count = 0;
    const std::size_t m = walk_records<std::uint8_t>(bytes, path, [&](std::size_t, const char* p, std::size_t d) {
        data.insert(data.end(), reinterpret_cast<const std::uint8_t*>(p), reinterpret_cast<const std::uint8_t*>(p) + d);
        ++count;
    });
    CodeMatrix out;
    out.count = count;
    out.m = m;
    out.data = std::move(data);
    return out;
}

void write_bvecs(const std::filesystem::path& path, const CodeMatrix& codes) {
    std::vector<char> bytes;
    bytes.reserve(codes.count * (4 + codes.m));
    for (std::size_t i = 0; i < codes.count; ++i) {
        store_le<std::int32_t>(bytes, static_cast<std::int32_t>(codes.m));
        const auto row = codes.row(i);
        bytes.insert(bytes.end(), row.begin(), row.end());
    }
    spit(path, bytes);
}

}  // namespace pairq::io
