#include <gtest/gtest.h>

#include <cmath>

#include "qdb/grover.hpp"

using namespace qdb;
using namespace qdb::grover;

namespace {

Vec random_vec(std::size_t K, Rng& rng) {
    std::vector<Complex> v(K);
    double norm = 0.0;
    for (auto& z : v) {
        z = Complex(rng.uniform() - 0.5, rng.uniform() - 0.5);
        norm += std::norm(z);
    }
    for (auto& z : v) z /= std::sqrt(norm);
    return Vec::from_amplitudes(v);
}

Eigen::VectorXcd col(const Vec& x) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(x.size()));
    for (std::size_t i = 0; i < x.size(); ++i) v[static_cast<Eigen::Index>(i)] = x[i];
    return v;
}

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(Grover, WalshExamples) {
    const auto u = walsh(Vec::basis(4, 0));
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(std::abs(u[i] - 0.5), 0.0, 1e-15);
    const auto e1 = walsh(Vec::basis(2, 1));
    EXPECT_NEAR(std::abs(e1[0] - 1 / std::sqrt(2.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(e1[1] + 1 / std::sqrt(2.0)), 0.0, 1e-15);
    Rng rng(1);
    const auto x = random_vec(32, rng);
    const auto y = walsh(walsh(x));
    for (std::size_t i = 0; i < 32; ++i) EXPECT_NEAR(std::abs(y[i] - x[i]), 0.0, 1e-14);
}

TEST(Grover, WalshMatrixMatchesFastTransform) {
    Rng rng(2);
    for (std::size_t K : {2, 8, 64}) {
        const auto x = random_vec(K, rng);
        EXPECT_LT(max_abs(walsh_matrix(K) * col(x) - col(walsh(x))), 1e-12);
    }
}

TEST(Grover, RejectsBadSizes) {
    EXPECT_THROW(Vec::uniform(6), DomainError);
    EXPECT_THROW(Vec::from_amplitudes({1.0, 1.0}), DomainError);
    EXPECT_THROW(Vec::basis(4, 4), DomainError);
}

TEST(Grover, DiffusionExamples) {
    const auto u = diffusion(Vec::uniform(8));
    for (std::size_t i = 0; i < 8; ++i) EXPECT_NEAR(std::abs(u[i] - 1 / std::sqrt(8.0)), 0.0, 1e-15);
    const auto y = diffusion(Vec::from_amplitudes({-0.5, 0.5, 0.5, 0.5}));
    EXPECT_NEAR(std::abs(y[0] - 1.0), 0.0, 1e-15);
    for (std::size_t i = 1; i < 4; ++i) EXPECT_NEAR(std::abs(y[i]), 0.0, 1e-15);
}

TEST(Grover, InversionAboutAverageAndMatrixForm) {
    Rng rng(3);
    for (std::size_t K : {2, 4, 8, 16, 32}) {
        const auto D = diffusion_matrix(K);
        EXPECT_LT(max_abs(D + walsh_matrix(K) * phase_inversion(K) * walsh_matrix(K).adjoint()), 1e-12);
        for (int trial = 0; trial < 100; ++trial) {
            const auto x = random_vec(K, rng);
            EXPECT_LE(inversion_residual(x), 1e-12);
            EXPECT_LT(max_abs(D * col(x) - col(diffusion(x))), 1e-12);
        }
    }
}

TEST(Grover, QuarterTargetsAfterOneStep) {
    const std::vector<std::size_t> t1{2};
    const auto y = grover_step(Vec::uniform(4), t1);
    EXPECT_NEAR(std::abs(y[2] - 1.0), 0.0, 1e-12);
    const std::vector<std::size_t> t4{1, 5, 6, 12};
    const auto z = grover_step(Vec::uniform(16), t4);
    for (std::size_t i = 0; i < 16; ++i) {
        const bool target = std::find(t4.begin(), t4.end(), i) != t4.end();
        EXPECT_NEAR(std::abs(z[i] - (target ? 0.5 : 0.0)), 0.0, 1e-12);
    }
    std::vector<std::size_t> t16;
    for (std::size_t i = 0; i < 64; i += 4) t16.push_back(i);
    const auto w = grover_step(Vec::uniform(64), t16);
    double p = 0.0;
    for (std::size_t i : t16) p += std::norm(w[i]);
    EXPECT_NEAR(p, 1.0, 1e-12);
}

TEST(Grover, SingleTargetAmplification) {
    const std::size_t K = 64;
    const std::vector<std::size_t> t{7};
    const auto y = grover_step(Vec::uniform(K), t);
    // Matrix oracle: D R_t applied to the uniform column.
    Eigen::MatrixXcd Rt = Eigen::MatrixXcd::Identity(K, K);
    Rt(7, 7) = -1.0;
    const Eigen::VectorXcd expected = diffusion_matrix(K) * Rt * Eigen::VectorXcd::Constant(K, 1 / std::sqrt(64.0));
    EXPECT_LT(max_abs(col(y) - expected), 1e-12);
    const double k = static_cast<double>(K);
    EXPECT_NEAR(y[7].real(), 3 / std::sqrt(k) - 4 / std::pow(k, 1.5), 1e-12);
    EXPECT_NEAR(y[7].real() - 1 / std::sqrt(k), 2 / std::sqrt(k), 4 / std::pow(k, 1.5) + 1e-12);
}

TEST(Grover, RdtViaMixingExamples) {
    const std::size_t K = 16;
    std::vector<std::size_t> all(K);
    for (std::size_t i = 0; i < K; ++i) all[i] = i;
    EXPECT_LT(max_abs(rdt_via_mixing(all, walsh_matrix(K)) - reflection_about(all, K)), 1e-12);
    EXPECT_LT(max_abs(rdt_via_mixing(all, walsh_matrix(K)) - diffusion_matrix(K)), 1e-12);

    const std::vector<std::size_t> zero{0};
    const auto R = rdt_via_mixing(zero, Eigen::MatrixXcd::Identity(K, K));
    Eigen::MatrixXcd expected = -Eigen::MatrixXcd::Identity(K, K);
    expected(0, 0) = 1.0;
    EXPECT_LT(max_abs(R - expected), 1e-15);
}

TEST(Grover, RandomMixingIsUnitaryWithChiFirstColumn) {
    const std::vector<std::size_t> C{1, 3, 4, 9, 30};
    const std::size_t K = 32;
    const auto M1 = random_c_mixing(C, K, 1);
    const auto M2 = random_c_mixing(C, K, 2);
    EXPECT_LE(unitarity_defect(M1), 1e-10);
    EXPECT_LE(unitarity_defect(M2), 1e-10);
    EXPECT_LT(max_abs(M1.col(0) - uniform_column(C, K)), 1e-12);
    EXPECT_GT(max_abs(M1 - M2), 1e-3);
    EXPECT_LT(max_abs(rdt_via_mixing(C, M1) - rdt_via_mixing(C, M2)), 1e-10);
    EXPECT_LT(max_abs(rdt_via_mixing(C, M1) - reflection_about(C, K)), 1e-10);
}

TEST(Grover, RdtViaMixingRejectsBadInput) {
    const std::vector<std::size_t> C{0, 1};
    Eigen::MatrixXcd notUnitary = Eigen::MatrixXcd::Identity(4, 4) * 2.0;
    EXPECT_THROW(rdt_via_mixing(C, notUnitary), DomainError);
    EXPECT_THROW(rdt_via_mixing(C, Eigen::MatrixXcd::Identity(4, 4)), DomainError);
}
