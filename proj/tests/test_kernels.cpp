#include <gtest/gtest.h>

#include <bit>
#include <random>
#include <vector>

#include "navigator/kernels.hpp"

using namespace navigator::kernels;

namespace {

std::vector<Isa> supported_isas() {
    std::vector<Isa> out;
    for (Isa i : {Isa::Scalar, Isa::Avx2, Isa::Neon})
        if (supported(i)) out.push_back(i);
    return out;
}

}  // namespace

TEST(Kernels, ScalarIsAlwaysAvailable) {
    EXPECT_TRUE(supported(Isa::Scalar));
    EXPECT_EQ(isa_name(active().isa).empty(), false);
    EXPECT_TRUE(supported(active().isa));
}

TEST(Kernels, VariantsAreBitIdentical) {
    std::mt19937 rng(5);
    std::normal_distribution<float> g(0.f, 1.f);
    const auto isas = supported_isas();
    for (std::size_t n : {0u, 1u, 3u, 7u, 8u, 9u, 15u, 16u, 17u, 31u, 64u, 255u, 256u, 257u, 1000u}) {
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<float> a(n), b(n);
            for (auto& x : a) x = g(rng);
            for (auto& x : b) x = g(rng) * 1e3f;
            const float ref = dot_scalar(a.data(), b.data(), n);
            for (Isa i : isas)
                ASSERT_EQ(std::bit_cast<std::uint32_t>(table(i).dot(a.data(), b.data(), n)),
                          std::bit_cast<std::uint32_t>(ref))
                    << isa_name(i) << " n=" << n;
        }
    }
}

TEST(Kernels, BatchMatchesSingleDot) {
    std::mt19937 rng(6);
    std::normal_distribution<float> g(0.f, 1.f);
    const std::size_t dim = 37, rows = 53;
    std::vector<float> q(dim), m(dim * rows);
    for (auto& x : q) x = g(rng);
    for (auto& x : m) x = g(rng);
    for (Isa i : supported_isas()) {
        std::vector<float> out(rows);
        table(i).dot_batch(q.data(), m.data(), rows, dim, out.data());
        for (std::size_t r = 0; r < rows; ++r)
            ASSERT_EQ(std::bit_cast<std::uint32_t>(out[r]),
                      std::bit_cast<std::uint32_t>(dot_scalar(q.data(), m.data() + r * dim, dim)));
    }
}

TEST(Kernels, UnsupportedIsaThrows) {
    for (Isa i : {Isa::Avx2, Isa::Neon})
        if (!supported(i)) EXPECT_THROW(table(i), std::runtime_error);
}
