#pragma once

// Patricia (compacted) tries over the z phrase-derived strings of a parse:
// either the reversed phrases or the text suffixes starting right after each
// phrase end. Nodes store only the first character and total length of their
// path label plus a leaf-rank interval, so searches descend blindly and the
// result is confirmed afterwards, either by extracting one candidate label
// prefix or by comparing Karp-Rabin fingerprints.
//
// Ordering: strings are compared with a prefix-sorts-first rule under a
// remapped alphabet in which the sentinel byte ranks below every other byte.
// A leaf whose string equals an internal node's full path label is recorded
// as "attached" to that node instead of getting an edge of its own; attached
// leaves take the smallest ranks inside the node's subtree. Duplicate strings
// (possible only for a trailing-less final phrase) tie-break by phrase index.

#include <cstdint>
#include <optional>
#include <vector>

#include "gsi/common.hpp"
#include "gsi/fingerprint.hpp"
#include "gsi/lz77.hpp"

namespace gsi {

enum class TrieKind : uint8_t { reversed_phrases = 0, boundary_suffixes = 1 };

// Inclusive 1-based leaf-rank interval; default-constructed means empty.
struct LexRange {
  uint32_t lo = 1;
  uint32_t hi = 0;

  bool empty() const { return lo > hi; }
  uint64_t count() const { return empty() ? 0 : uint64_t(hi) - lo + 1; }
  bool operator==(const LexRange&) const = default;
};

// Sort key of one byte: the virtual terminator is 0 (never a real byte), the
// sentinel is 1, every other byte is its value + 2.
inline uint32_t order_key(uint8_t byte, uint8_t sentinel) {
  return byte == sentinel ? 1u : uint32_t(byte) + 2u;
}

struct TrieNode {
  uint32_t parent = 0;       // root points at itself
  uint32_t key = 0;          // order key of the first incoming-edge character
  uint32_t child_begin = 0;  // children are contiguous, ascending by key;
  uint32_t child_end = 0;    // begin == end means no children
  uint32_t rank_lo = 1;      // leaf ranks covered by this subtree, inclusive
  uint32_t rank_hi = 0;
  uint32_t attached = 0;  // leaves equal to the path label: ranks
                          // rank_lo .. rank_lo + attached - 1
  uint64_t path_len = 0;  // characters on the root -> node path
  Fp path_fp{};           // fingerprint of the path label (when built with
                          // parameters; empty otherwise)

  bool operator==(const TrieNode&) const = default;
};

struct PatriciaTree {
  TrieKind kind = TrieKind::reversed_phrases;
  uint8_t sentinel = 0;
  bool has_fps = false;
  std::vector<TrieNode> nodes;        // breadth-first; nodes[0] is the root
  std::vector<uint32_t> leaf_order;   // rank (1-based) -> phrase index
  std::vector<uint32_t> leaf_rank;    // phrase index - 1 -> rank (1-based)

  uint32_t z() const { return uint32_t(leaf_order.size()); }
  const TrieNode& root() const { return nodes.front(); }
  LexRange full_range() const { return LexRange{1, z()}; }

  // Child of `id` whose incoming edge starts with the given key, or 0.
  uint32_t child_by_key(uint32_t id, uint32_t key) const;

  bool operator==(const PatriciaTree&) const = default;
};

// Builds the trie of the given kind over `text` (the sentinel-extended string
// the parse describes). The z indexed strings are never materialized; sorting
// runs over suffix arrays of remapped copies of the text. When `fp` is given,
// every node's path-label fingerprint is filled in. Mismatched parse/text ->
// invalid-input.
PatriciaTree build_patricia(TrieKind kind, ByteView text,
                            const lz77::Parse& parse, uint8_t sentinel,
                            const KrParams* fp = nullptr);

// Nodes visited by a blind descent, root first, path_len strictly increasing.
// `reached` is how many query characters the descent consumed; it stops early
// only when no child edge starts with the next query character.
struct DescentPath {
  std::vector<uint32_t> nodes;
  uint64_t reached = 0;
};

// CharAt: (uint64_t i) -> char/uint8_t, the query's i-th character (0-based).
template <class CharAt>
DescentPath blind_descend(const PatriciaTree& t, uint64_t qlen, CharAt&& at) {
  DescentPath p;
  p.nodes.push_back(0);
  uint32_t cur = 0;
  uint64_t depth = 0;
  while (depth < qlen) {
    const uint32_t next = t.child_by_key(
        cur, order_key(uint8_t(at(depth)), t.sentinel));
    if (next == 0) break;
    p.nodes.push_back(next);
    cur = next;
    if (t.nodes[cur].path_len >= qlen) {
      depth = qlen;
      break;
    }
    depth = t.nodes[cur].path_len;
  }
  p.reached = depth;
  return p;
}

// The shallowest visited node whose path label covers the first `len` query
// characters; nullopt when the descent never got that far.
std::optional<uint32_t> locus_node(const PatriciaTree& t, const DescentPath& p,
                                   uint64_t len);

// Length of the longest verified query prefix: compares the first `reached`
// characters of the deepest visited node's leftmost leaf string against the
// query. Extract: (uint32_t phrase, uint64_t len) -> Bytes, the first `len`
// characters of that phrase's indexed string (len never exceeds the string).
template <class Extract>
uint64_t verified_len(const PatriciaTree& t, ByteView piece,
                      const DescentPath& p, Extract&& extract) {
  if (p.reached == 0) return 0;
  const TrieNode& w = t.nodes[p.nodes.back()];
  const Bytes label = extract(t.leaf_order[w.rank_lo - 1], p.reached);
  uint64_t l = 0;
  while (l < p.reached && label[size_t(l)] == piece[size_t(l)]) ++l;
  return l;
}

// Rank range of the indexed strings having `piece` as a prefix; one candidate
// extraction confirms the blind descent. Empty range on any mismatch.
template <class Extract>
LexRange search_verify(const PatriciaTree& t, ByteView piece,
                       Extract&& extract) {
  const DescentPath p =
      blind_descend(t, piece.size(), [&](uint64_t i) { return piece[size_t(i)]; });
  if (p.reached < piece.size()) return LexRange{};
  if (verified_len(t, piece, p, extract) < piece.size()) return LexRange{};
  const TrieNode& w = t.nodes[p.nodes.back()];
  return LexRange{w.rank_lo, w.rank_hi};
}

// Fingerprint-guided search: same contract as search_verify up to hash
// collisions. Visits the same nodes but compares stored path-label
// fingerprints instead of extracting; when the search ends inside an edge the
// candidate's label prefix is fingerprinted on demand.
//   CharAt:  (uint64_t i) -> the piece's i-th character
//   PieceFp: (uint64_t len) -> Fp of the piece's first len characters
//   LeafFp:  (uint32_t phrase, uint64_t len) -> Fp of the first len
//            characters of that phrase's indexed string
template <class CharAt, class PieceFp, class LeafFp>
LexRange search_fp(const PatriciaTree& t, uint64_t piece_len, CharAt&& at,
                   PieceFp&& piece_fp, LeafFp&& leaf_fp) {
  uint32_t cur = 0;
  uint64_t depth = 0;
  while (depth < piece_len) {
    const uint32_t next = t.child_by_key(
        cur, order_key(uint8_t(at(depth)), t.sentinel));
    if (next == 0) return LexRange{};
    const TrieNode& w = t.nodes[next];
    if (w.path_len >= piece_len) {
      const Fp want = piece_fp(piece_len);
      const Fp got = w.path_len == piece_len
                         ? w.path_fp
                         : leaf_fp(t.leaf_order[w.rank_lo - 1], piece_len);
      if (got.hash != want.hash || got.len != want.len) return LexRange{};
      return LexRange{w.rank_lo, w.rank_hi};
    }
    if (w.path_fp.hash != piece_fp(w.path_len).hash) return LexRange{};
    cur = next;
    depth = w.path_len;
  }
  const TrieNode& w = t.nodes[cur];
  return LexRange{w.rank_lo, w.rank_hi};
}

}  // namespace gsi
