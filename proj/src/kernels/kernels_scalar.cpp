#include <bit>

#include "seqstroop/kernels.hpp"

namespace seqstroop::kernels::detail {

SetCounts set_counts_scalar(const std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
    SetCounts c;
    for (std::size_t i = 0; i < words; ++i) {
        c.intersection += static_cast<std::uint64_t>(std::popcount(a[i] & b[i]));
        c.union_ += static_cast<std::uint64_t>(std::popcount(a[i] | b[i]));
    }
    return c;
}

void axpby_scalar(double* out, const double* a, double sa, const double* b, double sb,
                  std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double x = sa * a[i];
        const double y = sb * b[i];
        out[i] = x + y;
    }
}

}  // namespace seqstroop::kernels::detail
