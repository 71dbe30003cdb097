#pragma once

// Data-parallel loops over a dense amplitude array indexed by Lehmer rank.
//
// Each kernel has a serial reference (qdb::kernels::serial) and an OpenMP
// version (qdb::kernels::parallel). Reductions in the parallel versions sum
// a fixed number of contiguous chunks and combine them in chunk order, so the
// result does not depend on the thread count or scheduling.

#include <cstdint>
#include <functional>
#include <span>

#include "qdb/core.hpp"

namespace qdb::kernels {

using PermPredicate = std::function<bool(std::span<const std::uint8_t>)>;

// Number of reduction chunks used by the parallel kernels.
inline constexpr std::size_t kReductionChunks = 64;

namespace serial {
void membership(std::span<const std::uint8_t> perms, std::size_t degree, const PermPredicate& pred,
                std::span<std::uint8_t> mask);
void phase_flip(std::span<Complex> amps, std::span<const std::uint8_t> mask);
Complex masked_sum(std::span<const Complex> amps, std::span<const std::uint8_t> mask);
// In-mask entries become coef - a, the rest -a.
void reflect(std::span<Complex> amps, std::span<const std::uint8_t> mask, Complex coef);
// sum x[i] * conj(y[i])
Complex inner(std::span<const Complex> x, std::span<const Complex> y);
double masked_norm2(std::span<const Complex> amps, std::span<const std::uint8_t> mask);
void prune(std::span<Complex> amps, double tol);
// codes[r] = sum_i perm_r[positions[i]] * degree^i
void assignment_codes(std::span<const std::uint8_t> perms, std::size_t degree,
                      std::span<const Position> positions, std::span<std::uint32_t> codes);
}  // namespace serial

namespace parallel {
void membership(std::span<const std::uint8_t> perms, std::size_t degree, const PermPredicate& pred,
                std::span<std::uint8_t> mask);
void phase_flip(std::span<Complex> amps, std::span<const std::uint8_t> mask);
Complex masked_sum(std::span<const Complex> amps, std::span<const std::uint8_t> mask);
void reflect(std::span<Complex> amps, std::span<const std::uint8_t> mask, Complex coef);
Complex inner(std::span<const Complex> x, std::span<const Complex> y);
double masked_norm2(std::span<const Complex> amps, std::span<const std::uint8_t> mask);
void prune(std::span<Complex> amps, double tol);
void assignment_codes(std::span<const std::uint8_t> perms, std::size_t degree,
                      std::span<const Position> positions, std::span<std::uint32_t> codes);
}  // namespace parallel

}  // namespace qdb::kernels
