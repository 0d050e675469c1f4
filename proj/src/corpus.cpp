#include "gsi/corpus.hpp"

#include <random>

namespace gsi {
namespace {

// Uniform value in [0, bound) via rejection on raw engine output.
uint64_t bounded(std::mt19937_64& rng, uint64_t bound) {
  const uint64_t limit = ~uint64_t{0} - (~uint64_t{0} % bound + 1) % bound;
  uint64_t v;
  do {
    v = rng();
  } while (v > limit);
  return v % bound;
}

}  // namespace

Bytes gen_corpus(uint64_t base_len, uint64_t copies, double mutation_rate,
                 uint64_t seed) {
  static constexpr char kAlpha[] = {'a', 'c', 'g', 't'};
  if (base_len == 0) fail(errc::invalid_input, "base length must be positive");
  if (!(mutation_rate >= 0.0) || !(mutation_rate <= 1.0))
    fail(errc::invalid_input, "mutation rate must lie in [0, 1]");

  std::mt19937_64 rng(seed);
  Bytes base(size_t(base_len), 0);
  for (auto& c : base) c = kAlpha[bounded(rng, 4)];

  Bytes out = base;
  out.reserve(size_t(base_len * (copies + 1)));
  // P(mutate) = threshold / 2^64, exact for rates k/2^64.
  const long double scaled = (long double)mutation_rate * 18446744073709551616.0L;
  const uint64_t threshold =
      scaled >= 18446744073709551615.0L ? ~uint64_t{0} : uint64_t(scaled);
  for (uint64_t c = 0; c < copies; ++c) {
    Bytes copy = base;
    for (auto& ch : copy) {
      if (rng() < threshold) {
        // Substitute with one of the three other characters.
        uint64_t r = bounded(rng, 3);
        for (char cand : kAlpha) {
          if (cand == ch) continue;
          if (r == 0) {
            ch = cand;
            break;
          }
          --r;
        }
      }
    }
    out += copy;
  }
  return out;
}

}  // namespace gsi
