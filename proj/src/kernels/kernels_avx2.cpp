// Compiled with -mavx2; only reached after a runtime CPU check.
#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <bit>

#include "seqstroop/kernels.hpp"

namespace seqstroop::kernels::detail {

namespace {

// Nibble-table popcount (Mula): per-byte counts via vpshufb, then summed into
// four 64-bit lanes with vpsadbw.
inline __m256i popcount_bytes(__m256i v) {
    const __m256i lut = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
                                         0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
    const __m256i low_mask = _mm256_set1_epi8(0x0f);
    const __m256i lo = _mm256_and_si256(v, low_mask);
    const __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low_mask);
    return _mm256_add_epi8(_mm256_shuffle_epi8(lut, lo), _mm256_shuffle_epi8(lut, hi));
}

inline std::uint64_t hsum_epi64(__m256i v) {
    alignas(32) std::uint64_t lanes[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), v);
    return lanes[0] + lanes[1] + lanes[2] + lanes[3];
}

}  // namespace

SetCounts set_counts_avx2(const std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
    const __m256i zero = _mm256_setzero_si256();
    __m256i inter = zero;
    __m256i uni = zero;
    std::size_t i = 0;
    for (; i + 4 <= words; i += 4) {
        const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        inter = _mm256_add_epi64(inter,
                                 _mm256_sad_epu8(popcount_bytes(_mm256_and_si256(va, vb)), zero));
        uni = _mm256_add_epi64(uni, _mm256_sad_epu8(popcount_bytes(_mm256_or_si256(va, vb)), zero));
    }
    SetCounts c{hsum_epi64(inter), hsum_epi64(uni)};
    for (; i < words; ++i) {
        c.intersection += static_cast<std::uint64_t>(std::popcount(a[i] & b[i]));
        c.union_ += static_cast<std::uint64_t>(std::popcount(a[i] | b[i]));
    }
    return c;
}

void axpby_avx2(double* out, const double* a, double sa, const double* b, double sb,
                std::size_t n) {
    const __m256d va_scale = _mm256_set1_pd(sa);
    const __m256d vb_scale = _mm256_set1_pd(sb);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d x = _mm256_mul_pd(va_scale, _mm256_loadu_pd(a + i));
        const __m256d y = _mm256_mul_pd(vb_scale, _mm256_loadu_pd(b + i));
        _mm256_storeu_pd(out + i, _mm256_add_pd(x, y));
    }
    for (; i < n; ++i) {
        const double x = sa * a[i];
        const double y = sb * b[i];
        out[i] = x + y;
    }
}

}  // namespace seqstroop::kernels::detail

#endif
