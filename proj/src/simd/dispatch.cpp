#include <atomic>
#include <stdexcept>
#include <string>

#include "rwc/simd/kernels.hpp"

namespace rwc::simd {

#if !defined(RWC_HAVE_AVX2)
namespace detail {
const KernelTable* avx2_table() { return nullptr; }
}  // namespace detail
#endif

std::string_view isa_name(Isa isa) {
    switch (isa) {
        case Isa::scalar: return "scalar";
        case Isa::avx2: return "avx2";
    }
    return "unknown";
}

std::optional<Isa> parse_isa(std::string_view name) {
    if (name == "scalar") return Isa::scalar;
    if (name == "avx2") return Isa::avx2;
    return std::nullopt;
}

bool isa_available(Isa isa) {
    switch (isa) {
        case Isa::scalar: return true;
        case Isa::avx2:
#if defined(RWC_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
            return detail::avx2_table() != nullptr && __builtin_cpu_supports("avx2") &&
                   __builtin_cpu_supports("fma");
#else
            return false;
#endif
    }
    return false;
}

const KernelTable* kernels_for(Isa isa) {
    if (!isa_available(isa)) return nullptr;
    switch (isa) {
        case Isa::scalar: return &scalar_kernels();
        case Isa::avx2: return detail::avx2_table();
    }
    return nullptr;
}

namespace {

const KernelTable* best_table() {
    if (const auto* t = kernels_for(Isa::avx2)) return t;
    return &scalar_kernels();
}

std::atomic<const KernelTable*>& active_slot() {
    static std::atomic<const KernelTable*> slot{best_table()};
    return slot;
}

}  // namespace

const KernelTable& active_kernels() { return *active_slot().load(std::memory_order_acquire); }

void set_active_isa(Isa isa) {
    const auto* t = kernels_for(isa);
    if (!t) {
        throw std::invalid_argument("instruction set '" + std::string(isa_name(isa)) +
                                    "' is not available on this machine");
    }
    active_slot().store(t, std::memory_order_release);
}

void reset_active_isa() { active_slot().store(best_table(), std::memory_order_release); }

}  // namespace rwc::simd
