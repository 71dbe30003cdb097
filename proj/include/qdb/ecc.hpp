#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "qdb/core.hpp"

namespace qdb::ecc {

/// Fixed-length bit string, at most 64 bits; bit i is (bits >> i) & 1.
struct Word {
    std::uint64_t bits = 0;
    unsigned length = 0;

    static Word from_string(const std::string& s);  // "1011", leftmost = bit 0
    std::string to_string() const;
    friend bool operator==(const Word&, const Word&) = default;
};

unsigned weight(const Word& a);
/// Hamming distance; throws DomainError on length mismatch.
unsigned distance(const Word& a, const Word& b);

/// Injective block encoding {0,1}^n -> {0,1}^{n1}.
struct Code {
    std::string name;
    unsigned n;
    unsigned n1;
    std::function<Word(const Word&)> encode_fn;
    // k for repetition codes, 0 otherwise.
    unsigned repeat = 0;

    Word encode(const Word& message) const;
};

/// Every message bit repeated k times (n1 = k n).
Code repetition(unsigned k, unsigned n);
/// The (7,4) Hamming code, systematic in positions 2, 4, 5, 6.
Code hamming74();

/// Brute force over all message pairs; n <= 12.
unsigned min_distance(const Code& code);
/// floor((d - 1) / 2)
unsigned correction_radius(const Code& code);

/// Nearest-codeword decoding within the correction radius; nullopt when
/// the word is farther than the radius from every codeword. Repetition codes
/// decode each k-bit group by majority, so up to floor((k-1)/2) errors per
/// group are corrected; a tied group gives nullopt.
std::optional<Word> decode(const Code& code, const Word& received);

struct ReversibleDecode {
    Word message;
    // received XOR encode(message)
    Word offset;
};

/// Keeps the error offset so that (message, offset) -> received is invertible.
std::optional<ReversibleDecode> reversible_decode(const Code& code, const Word& received);
Word reversible_encode(const Code& code, const ReversibleDecode& d);

/// Flips each bit independently with probability q.
Word inject_noise(const Word& w, double q, std::uint64_t seed);

}  // namespace qdb::ecc
