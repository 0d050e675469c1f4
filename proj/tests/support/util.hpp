#pragma once

// Shared helpers for the test suites: deterministic random text generation and
// small conveniences. Fixed seeds only; nothing here may depend on platform
// RNG distributions.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "gsi/common.hpp"

namespace testutil {

inline uint64_t bounded(std::mt19937_64& rng, uint64_t bound) {
  const uint64_t limit = ~uint64_t{0} - (~uint64_t{0} % bound + 1) % bound;
  uint64_t v;
  do {
    v = rng();
  } while (v > limit);
  return v % bound;
}

// Random text over the first `alpha` lowercase letters.
inline gsi::Bytes random_text(std::mt19937_64& rng, uint64_t len,
                              uint64_t alpha) {
  gsi::Bytes out(size_t(len), 0);
  for (auto& c : out) c = char('a' + bounded(rng, alpha));
  return out;
}

// The t-th binary text of a given length over {a, b}.
inline gsi::Bytes binary_text(uint64_t length, uint64_t t) {
  gsi::Bytes out(size_t(length), 0);
  for (uint64_t i = 0; i < length; ++i)
    out[size_t(i)] = (t >> i) & 1 ? 'b' : 'a';
  return out;
}

// Random pattern drawn from the text itself (a substring), optionally
// perturbed at one position.
inline gsi::Bytes substring_pattern(std::mt19937_64& rng, gsi::ByteView text,
                                    uint64_t max_len) {
  const uint64_t n = text.size();
  const uint64_t len = 1 + bounded(rng, std::min(max_len, n));
  const uint64_t pos = bounded(rng, n - len + 1);
  return gsi::Bytes(text.substr(size_t(pos), size_t(len)));
}

}  // namespace testutil
