#include "qdb/ecc.hpp"

#include <bit>
#include <limits>

namespace qdb::ecc {

namespace {

std::uint64_t mask(unsigned length) { return length >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << length) - 1; }

bool bit(std::uint64_t x, unsigned i) { return (x >> i) & 1u; }

}  // namespace

Word Word::from_string(const std::string& s) {
    if (s.size() > 64) throw DomainError("Word: longer than 64 bits");
    Word w{0, static_cast<unsigned>(s.size())};
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '1') {
            w.bits |= std::uint64_t{1} << i;
        } else if (s[i] != '0') {
            throw DomainError("Word: expected only 0 and 1");
        }
    }
    return w;
}

std::string Word::to_string() const {
    std::string s(length, '0');
    for (unsigned i = 0; i < length; ++i) {
        if (bit(bits, i)) s[i] = '1';
    }
    return s;
}

unsigned weight(const Word& a) { return static_cast<unsigned>(std::popcount(a.bits & mask(a.length))); }

unsigned distance(const Word& a, const Word& b) {
    if (a.length != b.length) throw DomainError("distance: length mismatch");
    return weight(Word{a.bits ^ b.bits, a.length});
}

Word Code::encode(const Word& message) const {
    if (message.length != n) throw DomainError(name + ": message must have " + std::to_string(n) + " bits");
    return encode_fn(message);
}

Code repetition(unsigned k, unsigned n) {
    if (k < 2 || n == 0 || k * n > 64) throw DomainError("repetition: need k >= 2, n >= 1, k n <= 64");
    return Code{"repetition-" + std::to_string(k), n, k * n, [k, n](const Word& m) {
                    Word w{0, k * n};
                    for (unsigned i = 0; i < n; ++i) {
                        if (!bit(m.bits, i)) continue;
                        for (unsigned r = 0; r < k; ++r) w.bits |= std::uint64_t{1} << (i * k + r);
                    }
                    return w;
                },
                k};
}

Code hamming74() {
    return Code{"hamming-7-4", 4, 7, [](const Word& m) {
                    const bool d1 = bit(m.bits, 0), d2 = bit(m.bits, 1), d3 = bit(m.bits, 2), d4 = bit(m.bits, 3);
                    // Codeword order p1 p2 d1 p3 d2 d3 d4.
                    const bool p1 = d1 ^ d2 ^ d4;
                    const bool p2 = d1 ^ d3 ^ d4;
                    const bool p3 = d2 ^ d3 ^ d4;
                    const bool c[7] = {p1, p2, d1, p3, d2, d3, d4};
                    Word w{0, 7};
                    for (unsigned i = 0; i < 7; ++i) {
                        if (c[i]) w.bits |= std::uint64_t{1} << i;
                    }
                    return w;
                }};
}

unsigned min_distance(const Code& code) {
    if (code.n > 12) throw SizeError("min_distance: brute force needs n <= 12");
    const std::uint64_t count = std::uint64_t{1} << code.n;
    unsigned best = std::numeric_limits<unsigned>::max();
    for (std::uint64_t a = 0; a < count; ++a) {
        const Word ea = code.encode(Word{a, code.n});
        for (std::uint64_t b = a + 1; b < count; ++b) {
            const unsigned d = distance(ea, code.encode(Word{b, code.n}));
            if (d == 0) throw DomainError(code.name + ": encoding is not injective");
            if (d < best) best = d;
        }
    }
    return best;
}

unsigned correction_radius(const Code& code) { return (min_distance(code) - 1) / 2; }

std::optional<Word> decode(const Code& code, const Word& received) {
    if (received.length != code.n1) throw DomainError("decode: received word has the wrong length");
    if (code.repeat > 0) {
        const unsigned k = code.repeat;
        Word msg{0, code.n};
        for (unsigned i = 0; i < code.n; ++i) {
            const auto ones = static_cast<unsigned>(std::popcount((received.bits >> (i * k)) & mask(k)));
            if (2 * ones == k) return std::nullopt;
            if (2 * ones > k) msg.bits |= std::uint64_t{1} << i;
        }
        return msg;
    }
    const unsigned t = correction_radius(code);
    const std::uint64_t count = std::uint64_t{1} << code.n;
    // Within radius t the nearest codeword is unique.
    for (std::uint64_t m = 0; m < count; ++m) {
        const Word msg{m, code.n};
        if (distance(code.encode(msg), received) <= t) return msg;
    }
    return std::nullopt;
}

std::optional<ReversibleDecode> reversible_decode(const Code& code, const Word& received) {
    auto msg = decode(code, received);
    if (!msg) return std::nullopt;
    const Word cw = code.encode(*msg);
    return ReversibleDecode{*msg, Word{received.bits ^ cw.bits, received.length}};
}

Word reversible_encode(const Code& code, const ReversibleDecode& d) {
    const Word cw = code.encode(d.message);
    if (d.offset.length != cw.length) throw DomainError("reversible_encode: offset length mismatch");
    return Word{cw.bits ^ d.offset.bits, cw.length};
}

Word inject_noise(const Word& w, double q, std::uint64_t seed) {
    if (!(q >= 0.0 && q <= 1.0)) throw DomainError("inject_noise: q must lie in [0, 1]");
    Rng rng(seed);
    Word out = w;
    for (unsigned i = 0; i < w.length; ++i) {
        if (rng.uniform() < q) out.bits ^= std::uint64_t{1} << i;
    }
    return out;
}

}  // namespace qdb::ecc
