#include "qdb/grover.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace qdb::grover {

namespace {

bool power_of_two(std::size_t K) { return K >= 1 && (K & (K - 1)) == 0; }

void check_size(std::size_t K) {
    if (!power_of_two(K)) throw DomainError("grover: K must be a power of two, got " + std::to_string(K));
}

void check_indices(std::span<const std::size_t> idx, std::size_t K) {
    for (auto i : idx) {
        if (i >= K) throw DomainError("grover: index out of range");
    }
}

Complex average(std::span<const Complex> a) {
    Complex s{0.0, 0.0};
    for (const auto& v : a) s += v;
    return s / static_cast<double>(a.size());
}

}  // namespace

Vec Vec::basis(std::size_t K, std::size_t i) {
    check_size(K);
    if (i >= K) throw DomainError("Vec::basis: index out of range");
    std::vector<Complex> a(K);
    a[i] = 1.0;
    return Vec(std::move(a));
}

Vec Vec::uniform(std::size_t K) {
    check_size(K);
    return Vec(std::vector<Complex>(K, 1.0 / std::sqrt(static_cast<double>(K))));
}

Vec Vec::from_amplitudes(std::vector<Complex> amps) {
    check_size(amps.size());
    double n2 = 0.0;
    for (const auto& a : amps) n2 += std::norm(a);
    if (std::abs(n2 - 1.0) > 1e-12) throw DomainError("Vec: amplitudes are not normalized");
    return Vec(std::move(amps));
}

Vec walsh(const Vec& x) {
    std::vector<Complex> a = x.amps_;
    const double h = 1.0 / std::sqrt(2.0);
    for (std::size_t half = 1; half < a.size(); half <<= 1) {
        for (std::size_t base = 0; base < a.size(); base += 2 * half) {
            for (std::size_t i = base; i < base + half; ++i) {
                const Complex u = a[i];
                const Complex v = a[i + half];
                a[i] = (u + v) * h;
                a[i + half] = (u - v) * h;
            }
        }
    }
    return Vec(std::move(a));
}

Vec diffusion(const Vec& x) {
    const Complex avg = average(x.amps_);
    std::vector<Complex> a(x.size());
    for (std::size_t p = 0; p < a.size(); ++p) a[p] = 2.0 * avg - x.amps_[p];
    return Vec(std::move(a));
}

Vec phase_flip(const Vec& x, std::span<const std::size_t> targets) {
    check_indices(targets, x.size());
    std::vector<Complex> a = x.amps_;
    std::vector<bool> hit(a.size(), false);
    for (auto t : targets) hit[t] = true;
    for (std::size_t p = 0; p < a.size(); ++p) {
        if (hit[p]) a[p] = -a[p];
    }
    return Vec(std::move(a));
}

Vec grover_step(const Vec& x, std::span<const std::size_t> targets) {
    if (targets.empty()) throw DomainError("grover_step: empty target set");
    return diffusion(phase_flip(x, targets));
}

double inversion_residual(const Vec& x) {
    const Vec d = diffusion(x);
    const Complex avg = average(x.amplitudes());
    double worst = 0.0;
    for (std::size_t p = 0; p < x.size(); ++p) {
        worst = std::max(worst, std::abs((x[p] - avg) - (avg - d[p])));
    }
    return worst;
}

Matrix walsh_matrix(std::size_t K) {
    check_size(K);
    Matrix W(1, 1);
    W(0, 0) = 1.0;
    Matrix J(2, 2);
    const double h = 1.0 / std::sqrt(2.0);
    J << h, h, h, -h;
    while (static_cast<std::size_t>(W.rows()) < K) {
        Matrix next(W.rows() * 2, W.cols() * 2);
        for (Eigen::Index i = 0; i < 2; ++i) {
            for (Eigen::Index j = 0; j < 2; ++j) {
                next.block(i * W.rows(), j * W.cols(), W.rows(), W.cols()) = J(i, j) * W;
            }
        }
        W = std::move(next);
    }
    return W;
}

Matrix phase_inversion(std::size_t K) {
    Matrix R = Matrix::Identity(static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(K));
    R(0, 0) = -1.0;
    return R;
}

Matrix diffusion_matrix(std::size_t K) {
    const Matrix W = walsh_matrix(K);
    return -W * phase_inversion(K) * W.adjoint();
}

Eigen::VectorXcd uniform_column(std::span<const std::size_t> C, std::size_t K) {
    check_indices(C, K);
    std::vector<std::size_t> members(C.begin(), C.end());
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    if (members.empty()) throw DomainError("uniform_column: empty set");
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(K));
    const double a = 1.0 / std::sqrt(static_cast<double>(members.size()));
    for (auto i : members) v(static_cast<Eigen::Index>(i)) = a;
    return v;
}

Matrix reflection_about(std::span<const std::size_t> C, std::size_t K) {
    const Eigen::VectorXcd chi = uniform_column(C, K);
    return 2.0 * chi * chi.adjoint() - Matrix::Identity(static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(K));
}

double unitarity_defect(const Matrix& M) {
    const Matrix E = M.adjoint() * M - Matrix::Identity(M.cols(), M.cols());
    return E.cwiseAbs().maxCoeff();
}

Matrix rdt_via_mixing(std::span<const std::size_t> C, const Matrix& M) {
    if (M.rows() != M.cols() || M.rows() == 0) throw DomainError("rdt_via_mixing: M must be square");
    const auto K = static_cast<std::size_t>(M.rows());
    if (unitarity_defect(M) > 1e-10) throw DomainError("rdt_via_mixing: M is not unitary");
    const Eigen::VectorXcd chi = uniform_column(C, K);
    if ((M.col(0) - chi).norm() > 1e-10) throw DomainError("rdt_via_mixing: M e_0 differs from chi_C");
    return -M * phase_inversion(K) * M.adjoint();
}

Matrix random_c_mixing(std::span<const std::size_t> C, std::size_t K, std::uint64_t seed) {
    const Eigen::VectorXcd chi = uniform_column(C, K);
    const auto k = static_cast<Eigen::Index>(K);
    Matrix M(k, k);
    M.col(0) = chi;
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (Eigen::Index c = 1; c < k; ++c) {
        Eigen::VectorXcd v(k);
        for (;;) {
            for (Eigen::Index i = 0; i < k; ++i) v(i) = Complex(normal(gen), normal(gen));
            const double start = v.norm();
            for (int pass = 0; pass < 2; ++pass) {
                const auto Q = M.leftCols(c);
                v -= Q * (Q.adjoint() * v);
            }
            // A nearly dependent draw loses too many digits; draw again.
            if (v.norm() > 1e-6 * start) break;
        }
        M.col(c) = v / v.norm();
    }
    return M;
}

}  // namespace qdb::grover
