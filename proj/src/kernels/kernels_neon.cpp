#if defined(__aarch64__)

#include <arm_neon.h>

#include <bit>

#include "seqstroop/kernels.hpp"

namespace seqstroop::kernels::detail {

SetCounts set_counts_neon(const std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
    uint64x2_t inter = vdupq_n_u64(0);
    uint64x2_t uni = vdupq_n_u64(0);
    std::size_t i = 0;
    for (; i + 2 <= words; i += 2) {
        const uint8x16_t va = vreinterpretq_u8_u64(vld1q_u64(a + i));
        const uint8x16_t vb = vreinterpretq_u8_u64(vld1q_u64(b + i));
        inter = vaddq_u64(inter, vpaddlq_u32(vpaddlq_u16(vpaddlq_u8(vcntq_u8(vandq_u8(va, vb))))));
        uni = vaddq_u64(uni, vpaddlq_u32(vpaddlq_u16(vpaddlq_u8(vcntq_u8(vorrq_u8(va, vb))))));
    }
    SetCounts c{vaddvq_u64(inter), vaddvq_u64(uni)};
    for (; i < words; ++i) {
        c.intersection += static_cast<std::uint64_t>(std::popcount(a[i] & b[i]));
        c.union_ += static_cast<std::uint64_t>(std::popcount(a[i] | b[i]));
    }
    return c;
}

void axpby_neon(double* out, const double* a, double sa, const double* b, double sb,
                std::size_t n) {
    const float64x2_t vsa = vdupq_n_f64(sa);
    const float64x2_t vsb = vdupq_n_f64(sb);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t x = vmulq_f64(vsa, vld1q_f64(a + i));
        const float64x2_t y = vmulq_f64(vsb, vld1q_f64(b + i));
        vst1q_f64(out + i, vaddq_f64(x, y));
    }
    for (; i < n; ++i) {
        const double x = sa * a[i];
        const double y = sb * b[i];
        out[i] = x + y;
    }
}

}  // namespace seqstroop::kernels::detail

#endif
