#include "gsi/index.hpp"

#include <algorithm>
#include <array>
#include <optional>

namespace gsi {

namespace {

constexpr uint64_t kNoFail = ~uint64_t{0};

uint8_t pick_sentinel(ByteView text) {
  std::array<bool, 256> present{};
  for (unsigned char b : text) present[b] = true;
  for (int b = 0; b < 256; ++b)
    if (!present[size_t(b)]) return uint8_t(b);
  fail(errc::alphabet_error, "text uses all 256 byte values; no sentinel fits");
}

void check_pattern(const SelfIndex& idx, ByteView pattern) {
  if (pattern.empty()) fail(errc::invalid_input, "pattern must be non-empty");
  for (char ch : pattern)
    if (uint8_t(ch) == idx.sentinel)
      fail(errc::invalid_input, "pattern contains the sentinel byte");
}

// True when no two distinct equal-length substrings of `s` share a hash.
bool substrings_hash_apart(const KrParams& p, ByteView s) {
  const PrefixHashes ph = prefix_hashes(p, s);
  const uint64_t n = s.size();
  std::vector<std::array<uint64_t, 3>> fps;  // (length, hash, start)
  fps.reserve(size_t(n * (n + 1) / 2));
  for (uint64_t i = 1; i <= n; ++i)
    for (uint64_t j = i; j <= n; ++j)
      fps.push_back({j - i + 1, substring_fp(p, ph, i, j).hash, i});
  std::sort(fps.begin(), fps.end());
  for (size_t k = 1; k < fps.size(); ++k) {
    const auto& a = fps[k - 1];
    const auto& b = fps[k];
    if (a[0] == b[0] && a[1] == b[1] &&
        s.substr(size_t(a[2]) - 1, size_t(a[0])) !=
            s.substr(size_t(b[2]) - 1, size_t(b[0])))
      return false;
  }
  return true;
}

// On a short text the modulus range (sigma, (n+1)^c] is narrow, and an
// unlucky draw makes distinct substrings collide routinely, so fingerprint-
// mode matching would return wrong occurrences as a matter of course. Redraw
// deterministically until the modulus lands in the top fifteen sixteenths of
// its range (a prime always exists there) and every pair of distinct
// equal-length substrings of the sentinel-extended text -- and of its
// reverse, which the reversed-phrase trie fingerprints -- hashes apart. Long
// texts skip the sweep: their modulus range is wide enough that collisions
// are never expected.
KrParams choose_params(ByteView text, uint8_t sentinel,
                       const BuildOptions& opt) {
  KrParams p = make_params(text, sentinel, opt.c, opt.seed);
  constexpr uint64_t kSweepMax = 1024;
  if (text.size() + 1 > kSweepMax) return p;

  const uint64_t n = text.size() + 1;  // sentinel included
  uint64_t range_top = 1;              // n^c, saturating at the modulus cap
  for (uint32_t i = 0; i < opt.c; ++i) {
    constexpr uint64_t kCap = (uint64_t{1} << 61) - 1;
    if (range_top > kCap / n) {
      range_top = kCap;
      break;
    }
    range_top *= n;
  }
  Bytes full(text);
  full.push_back(char(sentinel));
  const Bytes rev(full.rbegin(), full.rend());
  for (uint64_t salt = 1; salt <= 64; ++salt) {
    if (p.q > range_top / 16 && substrings_hash_apart(p, full) &&
        substrings_hash_apart(p, rev))
      return p;
    p = make_params(text, sentinel, opt.c, opt.seed + salt);
  }
  return p;  // best effort; collisions stay possible but were never required
}

bool fully_mapped(const SelfIndex& idx, ByteView pattern) {
  for (char ch : pattern)
    if (idx.params.char_map[uint8_t(ch)] < 0) return false;
  return true;
}

// Query-local search state. One instance serves every split of one query
// string W (the pattern, or the doubled pattern for rotations): position q
// owns two lazily built trie descents,
//
//   rev side: reverse(W[q-t+1 .. q]) for t = 1..min(q, left_cap) are exactly
//             the prefixes of one descent of the reversed-phrase trie,
//   suf side: W[q+1 .. q+l] for l = 0..min(|W|-q, right_cap) are the
//             prefixes of one descent of the boundary-suffix trie,
//
// each answering "rank range of indexed strings with this piece as prefix"
// per piece length. In verify mode a descent is confirmed once by extracting
// one candidate string; in fingerprint mode nodes are confirmed by hash as
// deep as each request needs, plus one partial-length hash per request that
// ends inside an edge.
class Matcher {
 public:
  Matcher(const SelfIndex& idx, Bytes query, uint64_t left_cap,
          uint64_t right_cap)
      : idx_(idx),
        acc_(idx.access()),
        fp_(idx.mode == IndexMode::fingerprint),
        w_(std::move(query)),
        left_cap_(left_cap),
        right_cap_(right_cap),
        rev_(w_.size() + 1),
        suf_(w_.size() + 1) {
    if (fp_) {
      // Bytes absent from the text are replaced by the sentinel for hashing
      // only; callers never request a piece containing such a byte.
      Bytes sub = w_;
      for (char& ch : sub)
        if (idx_.params.char_map[uint8_t(ch)] < 0) ch = char(idx_.sentinel);
      ph_ = prefix_hashes(idx_.params, sub);
      std::reverse(sub.begin(), sub.end());
      ph_rev_ = prefix_hashes(idx_.params, sub);
    }
  }

  // Rank range of reversed phrases with reverse(W[q-len+1 .. q]) as prefix;
  // empty when no phrase ends with W[q-len+1 .. q]. Requires len <= q.
  LexRange rev_range(uint64_t q, uint64_t len) {
    if (len == 0) return idx_.trie_rev.full_range();
    Side& sd = rev_side(q);
    auto piece_fp = [&](uint64_t l) {
      const uint64_t rstart = w_.size() - q + 1;  // piece start in reverse(W)
      return substring_fp(idx_.params, ph_rev_, rstart, rstart + l - 1);
    };
    auto leaf_fp = [&](uint32_t k, uint64_t l) { return rev_label_fp(k, l); };
    return side_range(sd, idx_.trie_rev, len, piece_fp, leaf_fp);
  }

  // Rank range of boundary suffixes with W[q+1 .. q+len] as prefix;
  // len == 0 means the full range. Requires q + len <= |W|.
  LexRange suf_range(uint64_t q, uint64_t len) {
    if (len == 0) return idx_.trie_suf.full_range();
    Side& sd = suf_side(q);
    auto piece_fp = [&](uint64_t l) {
      return substring_fp(idx_.params, ph_, q + 1, q + l);
    };
    auto leaf_fp = [&](uint32_t k, uint64_t l) { return suf_label_fp(k, l); };
    return side_range(sd, idx_.trie_suf, len, piece_fp, leaf_fp);
  }

 private:
  struct Side {
    bool built = false;
    DescentPath path;
    uint64_t ok_len = 0;  // verify mode: confirmed query prefix length
    // Fingerprint mode, lazily advanced:
    size_t checked = 0;        // path nodes whose stored hash was confirmed
    uint64_t fail_at = kNoFail;  // shallowest mismatching node depth
    std::vector<int8_t> partial;  // per-length edge checks: -1 / 0 / 1
  };

  // First `len` characters of phrase k's reversed string.
  Bytes rev_label(uint32_t k, uint64_t len) {
    const uint64_t e = idx_.parse.ends[size_t(k - 1)];
    Bytes b = acc_.extract_any(e - len + 1, len);
    std::reverse(b.begin(), b.end());
    return b;
  }
  // First `len` characters of the suffix starting after phrase k's end.
  Bytes suf_label(uint32_t k, uint64_t len) {
    const uint64_t e = idx_.parse.ends[size_t(k - 1)];
    return acc_.extract_any(e + 1, len);
  }
  Fp rev_label_fp(uint32_t k, uint64_t len) {
    const uint64_t e = idx_.parse.ends[size_t(k - 1)];
    if (len <= idx_.sprime.radius)
      return acc_.fp_crossing(k, e - len + 1, len, Direction::backward);
    return fp_of(idx_.params, rev_label(k, len));
  }
  Fp suf_label_fp(uint32_t k, uint64_t len) {
    const uint64_t e = idx_.parse.ends[size_t(k - 1)];
    if (len <= idx_.sprime.radius)
      return acc_.fp_crossing(k, e + 1, len, Direction::forward);
    return fp_of(idx_.params, suf_label(k, len));
  }

  Side& rev_side(uint64_t q) {
    Side& sd = rev_[size_t(q)];
    if (sd.built) return sd;
    sd.built = true;
    const uint64_t cap = std::min(q, left_cap_);
    sd.path = blind_descend(idx_.trie_rev, cap,
                            [&](uint64_t i) { return w_[size_t(q - 1 - i)]; });
    if (!fp_) {
      Bytes piece(w_.rbegin() + ptrdiff_t(w_.size() - q),
                  w_.rbegin() + ptrdiff_t(w_.size() - q + cap));
      sd.ok_len = verified_len(
          idx_.trie_rev, piece, sd.path,
          [&](uint32_t k, uint64_t l) { return rev_label(k, l); });
    }
    return sd;
  }

  Side& suf_side(uint64_t q) {
    Side& sd = suf_[size_t(q)];
    if (sd.built) return sd;
    sd.built = true;
    const uint64_t cap = std::min(w_.size() - q, right_cap_);
    sd.path = blind_descend(idx_.trie_suf, cap,
                            [&](uint64_t i) { return w_[size_t(q + i)]; });
    if (!fp_) {
      const ByteView piece = ByteView(w_).substr(size_t(q), size_t(cap));
      sd.ok_len = verified_len(
          idx_.trie_suf, piece, sd.path,
          [&](uint32_t k, uint64_t l) { return suf_label(k, l); });
    }
    return sd;
  }

  // Rank range for the piece of length `len` on this side, empty when the
  // piece does not prefix any indexed string (or fails confirmation).
  template <class PieceFp, class LeafFp>
  LexRange side_range(Side& sd, const PatriciaTree& t, uint64_t len,
                      PieceFp&& piece_fp, LeafFp&& leaf_fp) {
    if (len > sd.path.reached) return LexRange{};
    if (!fp_) {
      if (len > sd.ok_len) return LexRange{};
    } else {
      // Confirm stored node hashes down to this depth (resumable).
      while (sd.checked < sd.path.nodes.size() && sd.fail_at == kNoFail) {
        const TrieNode& nd = t.nodes[sd.path.nodes[sd.checked]];
        if (nd.path_len > len) break;
        if (nd.path_len > 0 && nd.path_fp.hash != piece_fp(nd.path_len).hash)
          sd.fail_at = nd.path_len;
        else
          ++sd.checked;
      }
      if (sd.fail_at <= len) return LexRange{};
    }
    const auto wopt = locus_node(t, sd.path, len);
    if (!wopt) return LexRange{};
    const TrieNode& w = t.nodes[*wopt];
    if (fp_ && w.path_len != len) {
      // The piece ends inside the edge above w: one hash of the candidate
      // label prefix settles it. Memoized per length.
      if (sd.partial.empty())
        sd.partial.assign(size_t(sd.path.reached) + 1, int8_t(-1));
      int8_t& memo = sd.partial[size_t(len)];
      if (memo < 0) {
        const Fp want = piece_fp(len);
        const Fp got = leaf_fp(t.leaf_order[w.rank_lo - 1], len);
        memo = (got.hash == want.hash && got.len == want.len) ? 1 : 0;
      }
      if (memo == 0) return LexRange{};
    }
    return LexRange{w.rank_lo, w.rank_hi};
  }

  const SelfIndex& idx_;
  BoundaryAccess acc_;
  bool fp_ = false;
  Bytes w_;
  uint64_t left_cap_ = 0;
  uint64_t right_cap_ = 0;
  PrefixHashes ph_, ph_rev_;  // over W / reverse(W); fingerprint mode only
  std::vector<Side> rev_, suf_;  // indexed by q; slot 0 unused
};

}  // namespace

BoundaryAccess SelfIndex::access() const {
  BoundaryAccess a;
  a.slp_s = &slp_s;
  a.slp_sp = &slp_sp;
  a.sprime = &sprime;
  a.marks = &marks;
  a.ends = &parse.ends;
  a.n = parse.n;
  a.crossing_calls = crossing_calls.get();
  if (mode == IndexMode::fingerprint) {
    a.fp_marks = &fp_marks;
    a.params = &params;
    a.sym_fwd = &sym_fwd;
    a.sym_bwd = &sym_bwd;
  }
  return a;
}

SelfIndex build_index(ByteView text, const BuildOptions& opt) {
  if (text.empty()) fail(errc::invalid_input, "text must be non-empty");
  SelfIndex idx;
  idx.mode = opt.mode;
  idx.c = opt.c;
  idx.seed = opt.seed;
  idx.sentinel = pick_sentinel(text);
  idx.params = choose_params(text, idx.sentinel, opt);

  Bytes s(text);
  s.push_back(char(idx.sentinel));
  idx.parse = lz77::parse(s);

  if (opt.slp != nullptr) {
    const ValidationReport rep = validate_grammar(*opt.slp, &s);
    if (!rep.ok)
      fail(errc::invalid_grammar,
           "supplied grammar rejected: " + rep.message);
    if (opt.mode == IndexMode::fingerprint) {
      const uint64_t bound =
          uint64_t(opt.balance_c) * std::max<uint32_t>(ceil_log2(s.size()), 1);
      if (opt.slp->height() > bound)
        fail(errc::balance_error,
             "supplied grammar is too tall for fingerprint mode");
    }
    idx.slp_s = *opt.slp;
  } else {
    idx.slp_s = build_balanced(s);
  }

  idx.sprime = build_sprime(s, idx.parse, default_radius(s.size()));
  idx.slp_sp = build_balanced(idx.sprime.text);
  idx.marks =
      build_bookmarks(idx.slp_sp, idx.sprime.boundary_pos,
                      extraction_levels(idx.sprime.n_prime()), opt.balance_c);
  const bool fp = opt.mode == IndexMode::fingerprint;
  if (fp) {
    idx.fp_marks = build_bookmarks(idx.slp_sp, idx.sprime.boundary_pos,
                                   fingerprint_levels(idx.sprime.n_prime()),
                                   opt.balance_c);
    idx.sym_fwd = symbol_fps(idx.slp_sp, idx.params, Direction::forward);
    idx.sym_bwd = symbol_fps(idx.slp_sp, idx.params, Direction::backward);
  }
  idx.trie_rev = build_patricia(TrieKind::reversed_phrases, s, idx.parse,
                                idx.sentinel, fp ? &idx.params : nullptr);
  idx.trie_suf = build_patricia(TrieKind::boundary_suffixes, s, idx.parse,
                                idx.sentinel, fp ? &idx.params : nullptr);
  idx.grid = build_grid(idx.parse, idx.trie_rev, idx.trie_suf);
  idx.sources = build_sources(idx.parse);
  return idx;
}

std::vector<Occurrence> locate(const SelfIndex& idx, ByteView pattern,
                               const QueryOptions& opt) {
  check_pattern(idx, pattern);
  const uint64_t m = pattern.size();
  std::vector<Occurrence> out;
  if (m > idx.n() || !fully_mapped(idx, pattern)) return out;

  // Primary occurrences: for each split i the piece pattern[1..i] must end
  // at some phrase end e_k (a suffix of phrase k) with pattern[i+1..m]
  // following, i.e. a grid point in (phrases ending with the left piece) x
  // (suffixes starting with the right piece). Each occurrence is found at
  // the first phrase end inside it and at no other split.
  Matcher mt(idx, Bytes(pattern), m, m);
  for (uint64_t i = 1; i <= m; ++i) {
    const LexRange a = mt.rev_range(i, i);
    if (a.empty()) continue;
    const LexRange b =
        i == m ? idx.trie_suf.full_range() : mt.suf_range(i, m - i);
    if (b.empty()) continue;
    for (uint32_t k : report(idx.grid, a.lo, a.hi, b.lo, b.hi)) {
      const uint64_t e = idx.parse.ends[size_t(k - 1)];
      out.push_back({e - i + 1, OccKind::primary, k});
    }
  }

  // Secondary closure: every phrase whose source interval covers a found
  // occurrence copies it forward. Images land strictly inside copied
  // regions, so none is ever a duplicate of a primary or of another image.
  for (size_t head = 0; head < out.size(); ++head) {
    const uint64_t s = out[head].pos;
    for (const auto& [k, src_start] : covering(idx.sources, s, s + m - 1)) {
      const uint64_t img =
          idx.parse.phrases[size_t(k - 1)].start + (s - src_start);
      out.push_back({img, OccKind::secondary, k});
    }
  }

  if (opt.verify_occurrences) {
    const BoundaryAccess acc = idx.access();
    const Bytes want(pattern);
    for (const Occurrence& o : out)
      if (acc.extract_any(o.pos, m) != want)
        fail(errc::verification_failed,
             "a reported occurrence does not match the pattern");
  }

  std::sort(out.begin(), out.end(),
            [](const Occurrence& a, const Occurrence& b) {
              return a.pos < b.pos;
            });
  return out;
}

uint64_t count(const SelfIndex& idx, ByteView pattern) {
  return locate(idx, pattern).size();
}

Bytes extract(const SelfIndex& idx, uint64_t i, uint64_t len) {
  const uint64_t n = idx.n();
  if (i < 1 || i - 1 > n || len > n - (i - 1))
    fail(errc::range_error, "extraction range beyond the text");
  return idx.access().extract_any(i, len);
}

std::vector<uint64_t> cyclic_matches(const SelfIndex& idx, ByteView pattern) {
  check_pattern(idx, pattern);
  const uint64_t m = pattern.size();
  std::vector<uint64_t> out;
  if (m > idx.n() || !fully_mapped(idx, pattern)) return out;

  // A rotation starting at j+1 occurs iff it has a primary occurrence: some
  // split of it pairs a phrase suffix with a following suffix. Over the
  // doubled pattern D = P P, the rotation's left piece of length t is
  // D[j+1 .. j+t] and the right piece is D[j+t+1 .. j+m]; grouping by the
  // split position p = j+t lets one descent pair serve every rotation.
  Bytes d(pattern);
  d.append(pattern);
  Matcher mt(idx, std::move(d), m, m == 0 ? 0 : m - 1);
  std::vector<bool> hit(size_t(m), false);
  uint64_t found = 0;
  for (uint64_t p = 1; p <= 2 * m - 1 && found < m; ++p) {
    const uint64_t jlo = p > m ? p - m : 0;
    const uint64_t jhi = std::min(m - 1, p - 1);
    for (uint64_t j = jlo; j <= jhi; ++j) {
      if (hit[size_t(j)]) continue;
      const uint64_t t = p - j;
      const LexRange a = mt.rev_range(p, t);
      if (a.empty()) continue;
      const LexRange b =
          t == m ? idx.trie_suf.full_range() : mt.suf_range(p, m - t);
      if (b.empty()) continue;
      if (!is_empty(idx.grid, a.lo, a.hi, b.lo, b.hi)) {
        hit[size_t(j)] = true;
        ++found;
      }
    }
  }
  for (uint64_t j = 0; j < m; ++j)
    if (hit[size_t(j)]) out.push_back(j);
  return out;
}

std::vector<std::pair<uint64_t, uint64_t>> maximal_substrings(
    const SelfIndex& idx, ByteView pattern) {
  check_pattern(idx, pattern);
  const uint64_t m = pattern.size();
  Matcher mt(idx, Bytes(pattern), m, m);

  // mapped_to[h]: last j such that pattern[h..j] stays within the indexed
  // alphabet (h-1 when pattern[h] itself does not).
  std::vector<uint64_t> mapped_to(size_t(m) + 2, 0);
  mapped_to[size_t(m) + 1] = m;
  for (uint64_t h = m; h >= 1; --h) {
    const bool ok = idx.params.char_map[uint8_t(pattern[size_t(h - 1)])] >= 0;
    mapped_to[size_t(h)] = ok ? std::max(h, mapped_to[size_t(h) + 1]) : h - 1;
  }

  // Does pattern[h..j] occur? True iff some split position q in [h, j]
  // pairs the left piece pattern[h..q] (a phrase suffix) with the right
  // piece pattern[q+1..j] in a non-empty grid rectangle.
  auto occurs = [&](uint64_t h, uint64_t j) {
    if (mapped_to[size_t(h)] < j) return false;
    for (uint64_t q = h; q <= j; ++q) {
      const LexRange a = mt.rev_range(q, q - h + 1);
      if (a.empty()) continue;
      const LexRange b =
          q == j ? idx.trie_suf.full_range() : mt.suf_range(q, j - q);
      if (b.empty()) continue;
      if (!is_empty(idx.grid, a.lo, a.hi, b.lo, b.hi)) return true;
    }
    return false;
  };

  // reach[h]: the largest j with pattern[h..j] occurring (h-1 when even
  // pattern[h..h] does not). Nondecreasing in h, so a single forward sweep
  // with a shared right frontier suffices.
  std::vector<uint64_t> reach(size_t(m) + 1, 0);
  uint64_t j = 0;
  for (uint64_t h = 1; h <= m; ++h) {
    if (j < h - 1) j = h - 1;
    while (j < m && occurs(h, j + 1)) ++j;
    reach[size_t(h)] = j;
  }

  // pattern[h..reach[h]] is right-maximal by construction; it is also
  // left-maximal iff extending to h-1 shrinks the reach.
  std::vector<std::pair<uint64_t, uint64_t>> out;
  for (uint64_t h = 1; h <= m; ++h)
    if (reach[size_t(h)] >= h &&
        (h == 1 || reach[size_t(h - 1)] < reach[size_t(h)]))
      out.push_back({h, reach[size_t(h)]});
  return out;
}

IndexStats stats(const SelfIndex& idx) {
  IndexStats st;
  st.n = idx.n();
  st.z = idx.z();
  st.n_prime = idx.sprime.n_prime();
  st.radius = idx.sprime.radius;
  st.rules_text = idx.slp_s.size();
  st.rules_reduced = idx.slp_sp.size();
  st.height_text = idx.slp_s.height();
  st.height_reduced = idx.slp_sp.height();
  st.sigma = idx.params.sigma;
  st.q = idx.params.q;
  st.mode = idx.mode;
  st.trie_rev_nodes = idx.trie_rev.nodes.size();
  st.trie_suf_nodes = idx.trie_suf.nodes.size();
  st.grid_nodes = idx.grid.nodes.size();
  st.source_entries = idx.sources.size();
  st.anchor_pairs = idx.marks.anchors.size();
  st.fp_anchor_pairs = idx.fp_marks.anchors.size();
  return st;
}

}  // namespace gsi
