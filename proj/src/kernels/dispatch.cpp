#include <atomic>
#include <cstdlib>
#include <string>

#include "pairq/error.hpp"
#include "pairq/kernels.hpp"

namespace pairq::kernels {

#ifdef PAIRQ_HAS_AVX2
const KernelTable* avx2_table_impl() noexcept;
#endif

namespace {

bool cpu_has_avx2() noexcept {
#if defined(PAIRQ_HAS_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Isa initial_isa() noexcept {
    if (const char* env = std::getenv("PAIRQ_ISA")) {
        const std::string want(env);
        if (want == "scalar") return Isa::Scalar;
        if (want == "avx2" && available(Isa::Avx2)) return Isa::Avx2;
    }
    return available(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<int>& active_slot() noexcept {
    static std::atomic<int> slot{static_cast<int>(initial_isa())};
    return slot;
}

}  // namespace

std::string_view to_string(Isa isa) noexcept {
    switch (isa) {
        case Isa::Scalar: return "scalar";
        case Isa::Avx2: return "avx2";
    }
    return "unknown";
}

const KernelTable* avx2_table() noexcept {
#ifdef PAIRQ_HAS_AVX2
    return avx2_table_impl();
#else
    return nullptr;
#endif
}

bool available(Isa isa) noexcept {
    switch (isa) {
        case Isa::Scalar: return true;
        case Isa::Avx2: {
            static const bool ok = avx2_table() != nullptr && cpu_has_avx2();
            return ok;
        }
    }
    return false;
}

const KernelTable& table(Isa isa) {
    if (!available(isa)) {
        throw Error(ErrorKind::InvalidArgument, std::string("kernel variant not available: ") +
                                                    std::string(to_string(isa)));
    }
    return isa == Isa::Avx2 ? *avx2_table() : scalar_table();
}

Isa active_isa() noexcept { return static_cast<Isa>(active_slot().load(std::memory_order_relaxed)); }

const KernelTable& active() noexcept {
    return active_isa() == Isa::Avx2 ? *avx2_table() : scalar_table();
}

void set_active(Isa isa) {
    (void)table(isa);
    active_slot().store(static_cast<int>(isa), std::memory_order_relaxed);
}

}  // namespace pairq::kernels
