#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference in
// kernels_scalar.cpp and vector variants selected at runtime; every variant
// must be bit-identical to the scalar one (see tests/test_kernels.cpp).

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace seqstroop::kernels {

struct SetCounts {
    std::uint64_t intersection = 0;
    std::uint64_t union_ = 0;

    friend constexpr bool operator==(const SetCounts&, const SetCounts&) = default;
};

/// popcount(a & b) and popcount(a | b) over `words` 64-bit words.
using SetCountsFn = SetCounts (*)(const std::uint64_t* a, const std::uint64_t* b,
                                  std::size_t words);

/// out[i] = (sa * a[i]) + (sb * b[i]); two roundings, never fused.
using Axpby2Fn = void (*)(double* out, const double* a, double sa, const double* b, double sb,
                          std::size_t n);

struct KernelTable {
    std::string_view isa;
    SetCountsFn set_counts;
    Axpby2Fn axpby;
};

const KernelTable& scalar_table() noexcept;

/// Null when the variant is not compiled in or the CPU lacks support.
const KernelTable* avx2_table() noexcept;
const KernelTable* neon_table() noexcept;

/// Best available table. SEQSTROOP_KERNELS=scalar forces the reference path.
const KernelTable& active() noexcept;

inline SetCounts set_counts(std::span<const std::uint64_t> a,
                            std::span<const std::uint64_t> b) noexcept {
    return active().set_counts(a.data(), b.data(), a.size() < b.size() ? a.size() : b.size());
}

inline void axpby(std::span<double> out, std::span<const double> a, double sa,
                  std::span<const double> b, double sb) noexcept {
    active().axpby(out.data(), a.data(), sa, b.data(), sb, out.size());
}

namespace detail {
SetCounts set_counts_scalar(const std::uint64_t* a, const std::uint64_t* b, std::size_t words);
void axpby_scalar(double* out, const double* a, double sa, const double* b, double sb,
                  std::size_t n);
#if defined(__x86_64__) || defined(_M_X64)
SetCounts set_counts_avx2(const std::uint64_t* a, const std::uint64_t* b, std::size_t words);
void axpby_avx2(double* out, const double* a, double sa, const double* b, double sb,
                std::size_t n);
#endif
#if defined(__aarch64__)
SetCounts set_counts_neon(const std::uint64_t* a, const std::uint64_t* b, std::size_t words);
void axpby_neon(double* out, const double* a, double sa, const double* b, double sb,
                std::size_t n);
#endif
}  // namespace detail

}  // namespace seqstroop::kernels
