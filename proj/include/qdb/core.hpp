#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace qdb {

using Complex = std::complex<double>;
using Key = std::uint32_t;
using Position = std::uint32_t;
using BigNat = boost::multiprecision::cpp_int;

// position -> block key; ordered so that branch lists sort deterministically.
using Assignment = std::map<Position, Key>;

// Amplitudes (or masses) at or below this magnitude are treated as zero.
inline constexpr double kPruneTol = 1e-15;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// State or table exceeds an engine cap (dense N > 8, explicit expansion).
struct SizeError : Error {
    using Error::Error;
};
struct DomainError : Error {
    using Error::Error;
};
struct NumericError : Error {
    using Error::Error;
};
// Predicate or action not expressible in the engine's operator algebra.
struct UnsupportedOperator : Error {
    using Error::Error;
};
// Branch enumeration would exceed the configured cap.
struct ResourceError : Error {
    using Error::Error;
};

/// Ratio num/den of two exact naturals rounded to double. Stays accurate
/// when both operands are far beyond the double range.
double ratio(const BigNat& num, const BigNat& den);

/// k! for k <= limit, from a process-wide cache.
const BigNat& factorial(std::size_t k);

/// Seeded generator with portable output: the raw mt19937_64 stream is
/// standardized, and the derived draws below avoid the
/// implementation-defined std distributions.
class Rng {
   public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform in [0, bound).
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) throw DomainError("Rng::below: empty range");
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % bound;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % bound;
    }

   private:
    std::mt19937_64 engine_;
};

}  // namespace qdb
