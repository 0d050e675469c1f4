#pragma once

// Karp-Rabin fingerprints. Characters are first mapped to dense values: the
// distinct bytes of the text get ranks 0..d-1 in byte order and the sentinel
// gets value d, so the base is sigma = d + 1. The hash of a value sequence
// v_1..v_k is sum v_i * sigma^(k-i) mod q, with q a uniformly drawn prime in
// (sigma, min(n^c, 2^61 - 1)] for a caller-fixed seed. Fingerprints carry
// (hash, sigma^len, len) so concatenation is O(1).

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "gsi/common.hpp"
#include "gsi/grammar.hpp"

namespace gsi {

struct KrParams {
  uint64_t sigma = 0;
  uint64_t q = 0;
  uint64_t seed = 0;
  uint32_t c = 4;
  uint8_t sentinel = 0;
  std::array<int16_t, 256> char_map{};  // byte -> value, -1 when absent

  bool operator==(const KrParams&) const = default;
};

// Draws parameters for a text body plus its sentinel byte (n = |body| + 1).
// Requires c >= 2 (parameter-error) and a sentinel absent from the body
// (alphabet-error).
KrParams make_params(ByteView body, uint8_t sentinel, uint32_t c,
                     uint64_t seed);

// Mapped value of a byte; unmapped -> alphabet-error.
uint64_t value_of(const KrParams& p, uint8_t byte);

struct Fp {
  uint64_t hash = 0;
  uint64_t pow = 1;  // sigma^len mod q
  uint64_t len = 0;

  bool operator==(const Fp&) const = default;
};

Fp fp_empty();
Fp concat(const KrParams& p, const Fp& a, const Fp& b);
Fp append_value(const KrParams& p, const Fp& a, uint64_t value);
Fp fp_of(const KrParams& p, ByteView bytes);

// All prefix hashes of a byte string, for O(1) substring fingerprints.
struct PrefixHashes {
  std::vector<uint64_t> hash;  // hash[i] = fingerprint of the first i bytes
  std::vector<uint64_t> pow;   // pow[i] = sigma^i mod q
};

PrefixHashes prefix_hashes(const KrParams& p, ByteView bytes);

// Fingerprint of bytes i..j (1-based, inclusive); i > j gives the empty fp.
Fp substring_fp(const KrParams& p, const PrefixHashes& ph, uint64_t i,
                uint64_t j);

enum class Direction : uint8_t { forward = 0, backward = 1 };

// Fingerprint of every symbol's expansion (or of its reverse), bottom-up.
std::vector<Fp> symbol_fps(const Slp& slp, const KrParams& p, Direction dir);

namespace detail {
bool is_prime_u64(uint64_t v);
uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m);
}  // namespace detail

}  // namespace gsi
