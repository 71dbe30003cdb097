#include "qdb/kernels.hpp"

#include <array>
#include <cmath>
#include <cstddef>

namespace qdb::kernels {

namespace serial {

void membership(std::span<const std::uint8_t> perms, std::size_t degree, const PermPredicate& pred,
                std::span<std::uint8_t> mask) {
    for (std::size_t r = 0; r < mask.size(); ++r) {
        mask[r] = pred(perms.subspan(r * degree, degree)) ? 1 : 0;
    }
}

void phase_flip(std::span<Complex> amps, std::span<const std::uint8_t> mask) {
    for (std::size_t r = 0; r < amps.size(); ++r) {
        if (mask[r]) amps[r] = -amps[r];
    }
}

Complex masked_sum(std::span<const Complex> amps, std::span<const std::uint8_t> mask) {
    Complex acc{0.0, 0.0};
    for (std::size_t r = 0; r < amps.size(); ++r) {
        if (mask[r]) acc += amps[r];
    }
    return acc;
}

void reflect(std::span<Complex> amps, std::span<const std::uint8_t> mask, Complex coef) {
    for (std::size_t r = 0; r < amps.size(); ++r) {
        amps[r] = mask[r] ? coef - amps[r] : -amps[r];
    }
}

Complex inner(std::span<const Complex> x, std::span<const Complex> y) {
    Complex acc{0.0, 0.0};
    for (std::size_t r = 0; r < x.size(); ++r) acc += x[r] * std::conj(y[r]);
    return acc;
}

double masked_norm2(std::span<const Complex> amps, std::span<const std::uint8_t> mask) {
    double acc = 0.0;
    for (std::size_t r = 0; r < amps.size(); ++r) {
        if (mask[r]) acc += std::norm(amps[r]);
    }
    return acc;
}

void prune(std::span<Complex> amps, double tol) {
    for (auto& a : amps) {
        if (std::abs(a) <= tol) a = Complex{0.0, 0.0};
    }
}

void assignment_codes(std::span<const std::uint8_t> perms, std::size_t degree,
                      std::span<const Position> positions, std::span<std::uint32_t> codes) {
    for (std::size_t r = 0; r < codes.size(); ++r) {
        std::uint32_t code = 0;
        std::uint32_t scale = 1;
        for (Position s : positions) {
            code += perms[r * degree + s] * scale;
            scale *= static_cast<std::uint32_t>(degree);
        }
        codes[r] = code;
    }
}

}  // namespace serial

namespace parallel {

namespace {

// [begin, end) of chunk c when n items are split into kReductionChunks pieces.
std::pair<std::ptrdiff_t, std::ptrdiff_t> chunk_bounds(std::size_t n, std::size_t c) {
    const std::size_t begin = n * c / kReductionChunks;
    const std::size_t end = n * (c + 1) / kReductionChunks;
    return {static_cast<std::ptrdiff_t>(begin), static_cast<std::ptrdiff_t>(end)};
}

template <class T, class Body>
T chunked_sum(std::size_t n, Body body) {
    std::array<T, kReductionChunks> partial{};
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(kReductionChunks); ++c) {
        const auto [begin, end] = chunk_bounds(n, static_cast<std::size_t>(c));
        T acc{};
        for (std::ptrdiff_t r = begin; r < end; ++r) acc += body(static_cast<std::size_t>(r));
        partial[static_cast<std::size_t>(c)] = acc;
    }
    T total{};
    for (const auto& p : partial) total += p;
    return total;
}

}  // namespace

void membership(std::span<const std::uint8_t> perms, std::size_t degree, const PermPredicate& pred,
                std::span<std::uint8_t> mask) {
    const auto n = static_cast<std::ptrdiff_t>(mask.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t r = 0; r < n; ++r) {
        const auto i = static_cast<std::size_t>(r);
        mask[i] = pred(perms.subspan(i * degree, degree)) ? 1 : 0;
    }
}

void phase_flip(std::span<Complex> amps, std::span<const std::uint8_t> mask) {
    const auto n = static_cast<std::ptrdiff_t>(amps.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t r = 0; r < n; ++r) {
        if (mask[static_cast<std::size_t>(r)]) amps[static_cast<std::size_t>(r)] *= -1.0;
    }
}

Complex masked_sum(std::span<const Complex> amps, std::span<const std::uint8_t> mask) {
    return chunked_sum<Complex>(amps.size(), [&](std::size_t r) { return mask[r] ? amps[r] : Complex{}; });
}

void reflect(std::span<Complex> amps, std::span<const std::uint8_t> mask, Complex coef) {
    const auto n = static_cast<std::ptrdiff_t>(amps.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t r = 0; r < n; ++r) {
        const auto i = static_cast<std::size_t>(r);
        amps[i] = mask[i] ? coef - amps[i] : -amps[i];
    }
}

Complex inner(std::span<const Complex> x, std::span<const Complex> y) {
    return chunked_sum<Complex>(x.size(), [&](std::size_t r) { return x[r] * std::conj(y[r]); });
}

double masked_norm2(std::span<const Complex> amps, std::span<const std::uint8_t> mask) {
    return chunked_sum<double>(amps.size(), [&](std::size_t r) { return mask[r] ? std::norm(amps[r]) : 0.0; });
}

void prune(std::span<Complex> amps, double tol) {
    const auto n = static_cast<std::ptrdiff_t>(amps.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t r = 0; r < n; ++r) {
        auto& a = amps[static_cast<std::size_t>(r)];
        if (std::abs(a) <= tol) a = Complex{0.0, 0.0};
    }
}

void assignment_codes(std::span<const std::uint8_t> perms, std::size_t degree,
                      std::span<const Position> positions, std::span<std::uint32_t> codes) {
    const auto n = static_cast<std::ptrdiff_t>(codes.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t r = 0; r < n; ++r) {
        const auto i = static_cast<std::size_t>(r);
        std::uint32_t code = 0;
        std::uint32_t scale = 1;
        for (Position s : positions) {
            code += perms[i * degree + s] * scale;
            scale *= static_cast<std::uint32_t>(degree);
        }
        codes[i] = code;
    }
}

}  // namespace parallel

}  // namespace qdb::kernels
