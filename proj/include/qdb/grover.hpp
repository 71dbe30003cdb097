#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qdb/core.hpp"

namespace qdb::grover {

using Matrix = Eigen::MatrixXcd;

/// Unit vector in C^K, K = 2^r.
class Vec {
   public:
    static Vec basis(std::size_t K, std::size_t i);
    static Vec uniform(std::size_t K);
    /// Validates K and unit norm (1e-12).
    static Vec from_amplitudes(std::vector<Complex> amps);

    std::size_t size() const { return amps_.size(); }
    Complex operator[](std::size_t i) const { return amps_[i]; }
    std::span<const Complex> amplitudes() const { return amps_; }

   private:
    explicit Vec(std::vector<Complex> amps) : amps_(std::move(amps)) {}
    friend Vec walsh(const Vec&);
    friend Vec diffusion(const Vec&);
    friend Vec phase_flip(const Vec&, std::span<const std::size_t>);

    std::vector<Complex> amps_;
};

/// Tensor power of the 2x2 Hadamard matrix J, applied in O(K log K).
Vec walsh(const Vec& x);

/// Inversion about the average: a_p -> 2 avg - a_p.
Vec diffusion(const Vec& x);

/// Negates the amplitudes at the listed indices.
Vec phase_flip(const Vec& x, std::span<const std::size_t> targets);

/// diffusion(phase_flip(x, T)).
Vec grover_step(const Vec& x, std::span<const std::size_t> targets);

/// max_p |(x_p - avg) - (avg - D(x)_p)|
double inversion_residual(const Vec& x);

Matrix walsh_matrix(std::size_t K);
/// R_0: phase inversion of e_0.
Matrix phase_inversion(std::size_t K);
/// -W R_0 W^{-1}
Matrix diffusion_matrix(std::size_t K);
/// 2 |chi_C><chi_C| - I
Matrix reflection_about(std::span<const std::size_t> C, std::size_t K);
/// Uniform superposition over C as a column.
Eigen::VectorXcd uniform_column(std::span<const std::size_t> C, std::size_t K);

/// -M R_0 M^{-1} for a C-mixing unitary M (M e_0 = chi_C).
Matrix rdt_via_mixing(std::span<const std::size_t> C, const Matrix& M);

/// Unitary whose first column is chi_C and whose remaining columns are a
/// seeded random orthonormal completion (Gram-Schmidt, two passes).
Matrix random_c_mixing(std::span<const std::size_t> C, std::size_t K, std::uint64_t seed);

/// max |(M^H M - I)_{ij}|
double unitarity_defect(const Matrix& M);

}  // namespace qdb::grover
