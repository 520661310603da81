#include <doctest.h>

#include <bit>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <vector>

#include "seqstroop/kernels.hpp"
#include "seqstroop/rng.hpp"

using namespace seqstroop;
using namespace seqstroop::kernels;

namespace {

std::vector<const KernelTable*> vector_tables() {
    std::vector<const KernelTable*> out;
    if (const auto* t = avx2_table()) out.push_back(t);
    if (const auto* t = neon_table()) out.push_back(t);
    return out;
}

// Independent of the kernels: bit-by-bit count.
SetCounts naive_counts(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
    SetCounts c;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (int bit = 0; bit < 64; ++bit) {
            const bool x = (a[i] >> bit) & 1u;
            const bool y = (b[i] >> bit) & 1u;
            c.intersection += x && y;
            c.union_ += x || y;
        }
    }
    return c;
}

std::vector<std::uint64_t> random_words(SplitMix64& rng, std::size_t n, int density) {
    std::vector<std::uint64_t> v(n);
    for (auto& w : v) {
        w = rng.next();
        for (int k = 0; k < density; ++k) w &= rng.next();  // sparser with each AND
    }
    return v;
}

bool same_bits(double x, double y) {
    std::uint64_t a, b;
    std::memcpy(&a, &x, 8);
    std::memcpy(&b, &y, 8);
    return a == b;
}

}  // namespace

TEST_CASE("scalar set counts agree with a bitwise count") {
    SplitMix64 rng(1);
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 17u, 64u}) {
        const auto a = random_words(rng, n, 1);
        const auto b = random_words(rng, n, 2);
        CHECK(scalar_table().set_counts(a.data(), b.data(), n) == naive_counts(a, b));
    }
}

TEST_CASE("scalar axpby is sa*a + sb*b with two roundings") {
    const std::vector<double> a{1.0, 2.5, -3.0, 0.1};
    const std::vector<double> b{4.0, 0.5, 1.0, 0.2};
    std::vector<double> out(4);
    scalar_table().axpby(out.data(), a.data(), 0.5, b.data(), -2.0, 4);
    for (std::size_t i = 0; i < 4; ++i) {
        volatile double p = 0.5 * a[i];
        volatile double q = -2.0 * b[i];
        CHECK(same_bits(out[i], p + q));
    }
}

TEST_CASE("vector set counts are identical to scalar on random inputs") {
    const auto tables = vector_tables();
    if (tables.empty()) MESSAGE("no vector kernels on this CPU; scalar only");
    SplitMix64 rng(2);
    for (const auto* t : tables) {
        CAPTURE(t->isa);
        for (int trial = 0; trial < 500; ++trial) {
            const std::size_t n = rng.below(70);
            const auto a = random_words(rng, n, static_cast<int>(rng.below(4)));
            const auto b = random_words(rng, n, static_cast<int>(rng.below(4)));
            CHECK(t->set_counts(a.data(), b.data(), n) == scalar_table().set_counts(a.data(), b.data(), n));
        }
        // All-ones words exercise the byte-sum saturation path.
        std::vector<std::uint64_t> ones(1000, ~0ULL);
        CHECK(t->set_counts(ones.data(), ones.data(), ones.size()) == SetCounts{64000, 64000});
    }
}

TEST_CASE("vector axpby is bit-identical to scalar on random inputs") {
    SplitMix64 rng(3);
    for (const auto* t : vector_tables()) {
        CAPTURE(t->isa);
        for (int trial = 0; trial < 300; ++trial) {
            const std::size_t n = rng.below(40);
            std::vector<double> a(n), b(n), x(n), y(n);
            for (std::size_t i = 0; i < n; ++i) {
                a[i] = (rng.uniform() - 0.5) * std::ldexp(1.0, static_cast<int>(rng.below(40)) - 20);
                b[i] = (rng.uniform() - 0.5) * std::ldexp(1.0, static_cast<int>(rng.below(40)) - 20);
            }
            const double sa = 1.0 / static_cast<double>(1 + rng.below(400));
            const double sb = -1.0 / static_cast<double>(1 + rng.below(400));
            t->axpby(x.data(), a.data(), sa, b.data(), sb, n);
            scalar_table().axpby(y.data(), a.data(), sa, b.data(), sb, n);
            for (std::size_t i = 0; i < n; ++i) CHECK(same_bits(x[i], y[i]));
        }
    }
}

TEST_CASE("active table is one of the known variants") {
    const auto isa = active().isa;
    CHECK((isa == "scalar" || isa == "avx2" || isa == "neon"));
    const std::vector<std::uint64_t> a{0b1011, 0}, b{0b0110, 1};
    CHECK(set_counts(a, b) == SetCounts{1, 5});
}
