#include "pairq/model_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "pairq/error.hpp"
#include "pairq/linalg.hpp"

namespace pairq::io {

namespace {

constexpr char kMagic[6] = {'P', 'A', 'I', 'R', 'Q', '1'};
constexpr std::int32_t kVersion = 1;
constexpr std::int32_t kHasRotation = 1;
constexpr std::int32_t kHasTransform = 2;
constexpr std::int32_t kHasMse = 4;

static_assert(std::endian::native == std::endian::little, "model files assume a little-endian host");

class Writer {
public:
    void bytes(const void* p, std::size_t n) {
        const auto* b = static_cast<const std::uint8_t*>(p);
        out_.insert(out_.end(), b, b + n);
    }
    void i32(std::int64_t v) {
        const auto x = static_cast<std::int32_t>(v);
        bytes(&x, 4);
    }
    void u8(std::uint8_t v) { out_.push_back(v); }
    void f32s(std::span<const double> values) {
        for (double v : values) {
            const auto f = static_cast<float>(v);
            bytes(&f, 4);
        }
    }
    std::vector<std::uint8_t> take() { return std::move(out_); }

private:
    std::vector<std::uint8_t> out_;
};

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

    void need(std::size_t n, const char* what) const {
        if (in_.size() - pos_ < n) throw Error(ErrorKind::Format, std::string("model file truncated in ") + what);
    }
    std::int32_t i32(const char* what) {
        need(4, what);
        std::int32_t v;
        std::memcpy(&v, in_.data() + pos_, 4);
        pos_ += 4;
        return v;
    }
    std::size_t count(const char* what) {
        const std::int32_t v = i32(what);
        if (v < 0) throw Error(ErrorKind::Format, std::string("negative ") + what);
        return static_cast<std::size_t>(v);
    }
    std::uint8_t u8(const char* what) {
        need(1, what);
        return in_[pos_++];
    }
    std::vector<double> f32s(std::size_t n, const char* what) {
        need(n * 4, what);
        std::vector<double> out(n);
        for (std::size_t i = 0; i < n; ++i) {
            float f;
            std::memcpy(&f, in_.data() + pos_ + 4 * i, 4);
            out[i] = f;
        }
        pos_ += n * 4;
        return out;
    }
    void magic() {
        need(sizeof(kMagic), "magic");
        if (std::memcmp(in_.data(), kMagic, sizeof(kMagic)) != 0) {
            throw Error(ErrorKind::Format, "not a PAIRQ1 model file");
        }
        pos_ += sizeof(kMagic);
    }
    bool done() const { return pos_ == in_.size(); }

private:
    std::span<const std::uint8_t> in_;
    std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> serialize_model(const StoredModel& model) {
    const PQCodebook& cb = model.opq.codebook;
    Writer w;
    w.bytes(kMagic, sizeof(kMagic));
    w.i32(kVersion);
    w.i32(model.transform ? static_cast<std::int32_t>(model.transform->mode) : 0);
    w.i32(model.transform ? model.transform->n : cb.source_dim());
    w.i32(cb.dim());
    w.i32(cb.m());
    w.i32(cb.k());
    for (std::size_t s : cb.sub_dims()) w.i32(s);
    std::int32_t flags = 0;
    if (!model.opq.rotation.empty()) flags |= kHasRotation;
    if (model.transform) flags |= kHasTransform;
    if (model.mse) flags |= kHasMse;
    w.i32(flags);
    if (model.transform) {
        const PairTransform& t = *model.transform;
        w.u8(static_cast<std::uint8_t>(t.mode));
        w.i32(t.n);
        w.i32(t.m);
        w.f32s(t.c.values());
        w.f32s(t.c_pinv.values());
    }
    if (flags & kHasRotation) w.f32s(model.opq.rotation.values());
    w.f32s(cb.centroids());
    if (model.mse) {
        if (model.mse->m != cb.m() || model.mse->k != cb.k()) {
            throw Error(ErrorKind::DimensionMismatch, "MSE table shape does not match the codebook");
        }
        w.f32s(model.mse->values);
    }
    return w.take();
}

StoredModel deserialize_model(std::span<const std::uint8_t> bytes) {
    Reader r(bytes);
    r.magic();
    const std::int32_t version = r.i32("version");
    if (version != kVersion) throw Error(ErrorKind::Format, "unsupported model version " + std::to_string(version));
    const std::int32_t mode = r.i32("mode");
    if (mode < 0 || mode > 2) throw Error(ErrorKind::Format, "unknown mode " + std::to_string(mode));
    const std::size_t n = r.count("n");
    const std::size_t dim = r.count("dim");
    const std::size_t m = r.count("M");
    const std::size_t k = r.count("K");
    if (m == 0 || m > dim || k == 0 || k > 256) throw Error(ErrorKind::Format, "bad M/K in header");
    std::vector<std::size_t> sub_dims(m);
    for (auto& s : sub_dims) s = r.count("sub_dims");
    const std::int32_t flags = r.i32("flags");

    StoredModel out;
    std::size_t codebook_source = n;
    if (flags & kHasTransform) {
        const auto tmode = static_cast<PairMode>(r.u8("transform mode"));
        if (static_cast<std::int32_t>(tmode) != mode) throw Error(ErrorKind::Format, "transform mode disagrees with header");
        PairTransform t;
        t.mode = tmode;
        t.n = r.count("transform n");
        t.m = r.count("transform m");
        if (t.n != n || t.m != (tmode == PairMode::ScalarProduct ? n : n + 1) || t.m > dim) {
            throw Error(ErrorKind::Format, "transform dimensions disagree with header");
        }
        t.c = DenseMatrix(t.m, t.m, r.f32s(t.m * t.m, "C"));
        t.c_pinv = DenseMatrix(t.m, t.m, r.f32s(t.m * t.m, "C_pinv"));
        t.g = t.c.transposed() * t.c;
        codebook_source = t.m;
        out.transform = std::move(t);
    } else if (mode != 0) {
        throw Error(ErrorKind::Format, "pairwise mode without a transform block");
    }
    if (flags & kHasRotation) {
        // float32 storage loses orthogonality; project back to the nearest orthogonal matrix.
        out.opq.rotation = orthogonal_polar(DenseMatrix(dim, dim, r.f32s(dim * dim, "rotation")));
    } else {
        out.opq.rotation = DenseMatrix::identity(dim);
    }
    out.opq.codebook = PQCodebook(codebook_source, sub_dims, k, r.f32s(k * dim, "centroids"));
    if (flags & kHasMse) out.mse = MseTable{m, k, r.f32s(m * k, "MSE table")};
    out.opq.converged = true;
    if (!r.done()) throw Error(ErrorKind::Format, "trailing bytes after model");
    return out;
}

void save_model(const std::filesystem::path& path, const StoredModel& model) {
    const auto bytes = serialize_model(model);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorKind::Io, "write failed: " + path.string());
}

StoredModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
    const std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return deserialize_model(std::span(reinterpret_cast<const std::uint8_t*>(raw.data()), raw.size()));
}

StoredModel stored(const PairQModel& model) { return StoredModel{model.transform, model.opq, std::nullopt}; }

PairQModel as_pairq(const StoredModel& model) {
    if (!model.transform) throw Error(ErrorKind::ModeMismatch, "model file has no pairwise transform");
    PairQModel out;
    out.transform = *model.transform;
    out.opq = model.opq;
    out.query_norm_included = out.transform.mode == PairMode::SquaredDistance;
    return out;
}

}  // namespace pairq::io
