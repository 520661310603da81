#include <cstdlib>
#include <string_view>

#include "seqstroop/kernels.hpp"

namespace seqstroop::kernels {

const KernelTable& scalar_table() noexcept {
    static const KernelTable table{"scalar", &detail::set_counts_scalar, &detail::axpby_scalar};
    return table;
}

const KernelTable* avx2_table() noexcept {
#if defined(__x86_64__) || defined(_M_X64)
    static const KernelTable table{"avx2", &detail::set_counts_avx2, &detail::axpby_avx2};
    static const bool supported = [] {
        __builtin_cpu_init();
        return __builtin_cpu_supports("avx2") != 0;
    }();
    return supported ? &table : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable* neon_table() noexcept {
#if defined(__aarch64__)
    // Advanced SIMD is mandatory on AArch64.
    static const KernelTable table{"neon", &detail::set_counts_neon, &detail::axpby_neon};
    return &table;
#else
    return nullptr;
#endif
}

const KernelTable& active() noexcept {
    static const KernelTable* chosen = [] {
        if (const char* env = std::getenv("SEQSTROOP_KERNELS")) {
            if (std::string_view(env) == "scalar") return &scalar_table();
        }
        if (const auto* t = avx2_table()) return t;
        if (const auto* t = neon_table()) return t;
        return &scalar_table();
    }();
    return *chosen;
}

}  // namespace seqstroop::kernels
