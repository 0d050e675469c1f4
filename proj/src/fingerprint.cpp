#include "gsi/fingerprint.hpp"

#include <algorithm>
#include <random>

namespace gsi {
namespace detail {

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
  return uint64_t((__uint128_t)a * b % m);
}

namespace {

uint64_t powmod(uint64_t b, uint64_t e, uint64_t m) {
  uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool is_prime_u64(uint64_t v) {
  if (v < 2) return false;
  for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                     23ull, 29ull, 31ull, 37ull}) {
    if (v % p == 0) return v == p;
  }
  uint64_t d = v - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // Deterministic witness set for 64-bit integers.
  for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                     23ull, 29ull, 31ull, 37ull}) {
    uint64_t x = powmod(a, d, v);
    if (x == 1 || x == v - 1) continue;
    bool witness = true;
    for (int t = 1; t < s; ++t) {
      x = mulmod(x, x, v);
      if (x == v - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

}  // namespace detail

namespace {

// min(n^c, 2^61 - 1) without overflow.
uint64_t pow_saturating(uint64_t n, uint32_t c) {
  constexpr uint64_t kCap = (uint64_t(1) << 61) - 1;
  uint64_t r = 1;
  for (uint32_t t = 0; t < c; ++t) {
    if (r > kCap / n) return kCap;
    r *= n;
  }
  return std::min(r, kCap);
}

uint64_t bounded(std::mt19937_64& rng, uint64_t bound) {
  const uint64_t limit = ~uint64_t{0} - (~uint64_t{0} % bound + 1) % bound;
  uint64_t v;
  do {
    v = rng();
  } while (v > limit);
  return v % bound;
}

}  // namespace

KrParams make_params(ByteView body, uint8_t sentinel, uint32_t c,
                     uint64_t seed) {
  if (c < 2)
    fail(errc::parameter_error,
         "modulus exponent must be at least 2, got " + std::to_string(c));
  if (body.empty()) fail(errc::invalid_input, "empty text");

  KrParams p;
  p.c = c;
  p.seed = seed;
  p.sentinel = sentinel;
  p.char_map.fill(-1);

  bool present[256] = {};
  for (unsigned char ch : body) present[ch] = true;
  if (present[sentinel])
    fail(errc::alphabet_error, "sentinel byte occurs in the text body");
  int16_t next = 0;
  for (int b = 0; b < 256; ++b)
    if (present[b]) p.char_map[size_t(b)] = next++;
  p.char_map[sentinel] = next;
  p.sigma = uint64_t(next) + 1;

  const uint64_t n = uint64_t(body.size()) + 1;
  const uint64_t hi = pow_saturating(n, c);
  if (hi <= p.sigma)
    fail(errc::parameter_error, "modulus range is empty for this alphabet");
  std::mt19937_64 rng(seed);
  const uint64_t span = hi - p.sigma;  // candidates sigma+1 .. hi
  for (int attempts = 0; attempts < (1 << 24); ++attempts) {
    const uint64_t cand = p.sigma + 1 + bounded(rng, span);
    if (detail::is_prime_u64(cand)) {
      p.q = cand;
      return p;
    }
  }
  fail(errc::parameter_error, "failed to find a prime modulus");
}

uint64_t value_of(const KrParams& p, uint8_t byte) {
  const int16_t v = p.char_map[byte];
  if (v < 0)
    fail(errc::alphabet_error,
         "byte " + std::to_string(int(byte)) + " is not in the alphabet");
  return uint64_t(v);
}

Fp fp_empty() { return Fp{0, 1, 0}; }

Fp concat(const KrParams& p, const Fp& a, const Fp& b) {
  Fp r;
  r.hash = (detail::mulmod(a.hash, b.pow, p.q) + b.hash) % p.q;
  r.pow = detail::mulmod(a.pow, b.pow, p.q);
  r.len = a.len + b.len;
  return r;
}

Fp append_value(const KrParams& p, const Fp& a, uint64_t value) {
  Fp r;
  r.hash = (detail::mulmod(a.hash, p.sigma % p.q, p.q) + value % p.q) % p.q;
  r.pow = detail::mulmod(a.pow, p.sigma % p.q, p.q);
  r.len = a.len + 1;
  return r;
}

Fp fp_of(const KrParams& p, ByteView bytes) {
  Fp r = fp_empty();
  for (unsigned char ch : bytes) r = append_value(p, r, value_of(p, ch));
  return r;
}

PrefixHashes prefix_hashes(const KrParams& p, ByteView bytes) {
  PrefixHashes ph;
  ph.hash.resize(bytes.size() + 1);
  ph.pow.resize(bytes.size() + 1);
  ph.hash[0] = 0;
  ph.pow[0] = 1 % p.q;
  const uint64_t base = p.sigma % p.q;
  for (size_t i = 0; i < bytes.size(); ++i) {
    ph.hash[i + 1] =
        (detail::mulmod(ph.hash[i], base, p.q) + value_of(p, uint8_t(bytes[i]))) %
        p.q;
    ph.pow[i + 1] = detail::mulmod(ph.pow[i], base, p.q);
  }
  return ph;
}

Fp substring_fp(const KrParams& p, const PrefixHashes& ph, uint64_t i,
                uint64_t j) {
  if (i > j) return fp_empty();
  if (i < 1 || j >= ph.hash.size())
    fail(errc::range_error, "substring fingerprint out of bounds");
  const uint64_t len = j - i + 1;
  const uint64_t cut = detail::mulmod(ph.hash[size_t(i - 1)], ph.pow[size_t(len)], p.q);
  return Fp{(ph.hash[size_t(j)] + p.q - cut) % p.q, ph.pow[size_t(len)], len};
}

std::vector<Fp> symbol_fps(const Slp& slp, const KrParams& p, Direction dir) {
  const size_t r = size_t(slp.size());
  // Process symbols by increasing height so children come first.
  std::vector<uint32_t> order(r);
  for (uint32_t s = 0; s < r; ++s) order[s] = s;
  std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
    return slp.height(a) < slp.height(b);
  });
  std::vector<Fp> out(r);
  for (uint32_t s : order) {
    const Rule& rule = slp.rule(s);
    if (rule.terminal) {
      out[s] = append_value(p, fp_empty(), value_of(p, rule.ch));
    } else if (dir == Direction::forward) {
      out[s] = concat(p, out[rule.left], out[rule.right]);
    } else {
      out[s] = concat(p, out[rule.right], out[rule.left]);
    }
  }
  return out;
}

}  // namespace gsi
