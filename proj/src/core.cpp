#include "qdb/core.hpp"

#include <cmath>
#include <deque>
#include <mutex>

namespace qdb {

double ratio(const BigNat& num, const BigNat& den) {
    if (den == 0) throw DomainError("ratio: zero denominator");
    if (num == 0) return 0.0;
    const long long num_bits = static_cast<long long>(boost::multiprecision::msb(num));
    const long long den_bits = static_cast<long long>(boost::multiprecision::msb(den));
    // Scale so the integer quotient carries ~64 significant bits.
    const long long shift = 64 - (num_bits - den_bits);
    BigNat q;
    if (shift >= 0) {
        q = (num << static_cast<unsigned>(shift)) / den;
    } else {
        q = num / (den << static_cast<unsigned>(-shift));
    }
    return std::ldexp(q.convert_to<double>(), static_cast<int>(-shift));
}

const BigNat& factorial(std::size_t k) {
    static std::mutex mu;
    // deque keeps references stable while growing.
    static std::deque<BigNat> table{BigNat(1)};
    std::lock_guard<std::mutex> lock(mu);
    while (table.size() <= k) {
        table.push_back(table.back() * table.size());
    }
    return table[k];
}

}  // namespace qdb
