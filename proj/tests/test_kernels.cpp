#include <gtest/gtest.h>

#include <cmath>

#include <omp.h>

#include "qdb/block_table.hpp"
#include "qdb/kernels.hpp"

using namespace qdb;
namespace ks = qdb::kernels::serial;
namespace kp = qdb::kernels::parallel;

namespace {

// Unit-norm random vector.
std::vector<Complex> random_amps(std::size_t size, Rng& rng) {
    std::vector<Complex> v(size);
    double n2 = 0.0;
    for (auto& z : v) {
        z = Complex(rng.uniform() - 0.5, rng.uniform() - 0.5);
        n2 += std::norm(z);
    }
    for (auto& z : v) z /= std::sqrt(n2);
    return v;
}

std::vector<std::uint8_t> random_mask(std::size_t size, Rng& rng) {
    std::vector<std::uint8_t> m(size);
    for (auto& b : m) b = rng.uniform() < 0.3;
    return m;
}

}  // namespace

class KernelParity : public ::testing::TestWithParam<std::size_t> {};

TEST_P(KernelParity, ParallelMatchesSerial) {
    const std::size_t N = GetParam();
    const auto perms = permutation_table(N);
    const std::size_t size = perms.size() / N;
    Rng rng(N);

    const kernels::PermPredicate pred = [](std::span<const std::uint8_t> p) { return p[0] < p[1]; };
    std::vector<std::uint8_t> m1(size), m2(size);
    ks::membership(perms, N, pred, m1);
    kp::membership(perms, N, pred, m2);
    EXPECT_EQ(m1, m2);

    const auto x = random_amps(size, rng);
    const auto y = random_amps(size, rng);
    const auto mask = random_mask(size, rng);

    EXPECT_LT(std::abs(ks::masked_sum(x, mask) - kp::masked_sum(x, mask)), 1e-12);
    EXPECT_LT(std::abs(ks::inner(x, y) - kp::inner(x, y)), 1e-12);
    EXPECT_NEAR(ks::masked_norm2(x, mask), kp::masked_norm2(x, mask), 1e-12);

    auto a = x, b = x;
    ks::phase_flip(a, mask);
    kp::phase_flip(b, mask);
    EXPECT_EQ(a, b);
    ks::reflect(a, mask, Complex(0.3, -0.1));
    kp::reflect(b, mask, Complex(0.3, -0.1));
    EXPECT_EQ(a, b);

    a[0] = 1e-17;
    b[0] = 1e-17;
    ks::prune(a, kPruneTol);
    kp::prune(b, kPruneTol);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a[0], Complex(0.0));

    if (N >= 3) {
        const std::vector<Position> pos{1, 2};
        std::vector<std::uint32_t> c1(size), c2(size);
        ks::assignment_codes(perms, N, pos, c1);
        kp::assignment_codes(perms, N, pos, c2);
        EXPECT_EQ(c1, c2);
        EXPECT_EQ(c1[0], perms[1] + perms[2] * N);
    }
}

INSTANTIATE_TEST_SUITE_P(Sizes, KernelParity, ::testing::Values(2, 4, 8));

TEST(Kernels, ReflectSemantics) {
    std::vector<Complex> amps{0.6, 0.8, 0.1};
    const std::vector<std::uint8_t> mask{1, 1, 0};
    ks::reflect(amps, mask, 1.4);
    EXPECT_NEAR(std::abs(amps[0] - Complex(0.8)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(amps[1] - Complex(0.6)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(amps[2] - Complex(-0.1)), 0.0, 1e-15);
}

TEST(Kernels, ParallelReductionsIgnoreThreadCount) {
    const auto perms = permutation_table(8);
    const std::size_t size = perms.size() / 8;
    Rng rng(3);
    const auto x = random_amps(size, rng);
    const auto y = random_amps(size, rng);
    const auto mask = random_mask(size, rng);
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const Complex s1 = kp::masked_sum(x, mask);
    const Complex i1 = kp::inner(x, y);
    omp_set_num_threads(4);
    const Complex s4 = kp::masked_sum(x, mask);
    const Complex i4 = kp::inner(x, y);
    omp_set_num_threads(saved);
    EXPECT_EQ(s1, s4);
    EXPECT_EQ(i1, i4);
}
