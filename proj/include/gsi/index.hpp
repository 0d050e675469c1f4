#pragma once

// The assembled self-index. Built from a byte string, it answers
//
//   - locate / count : all occurrences of a pattern, classified as primary
//     (the occurrence interval contains a phrase end) or secondary (generated
//     by copying an earlier occurrence),
//   - extract        : any substring, in time O(len + log n),
//   - cyclic_matches : which rotations of a pattern occur in the text,
//   - maximal_substrings : the maximal pattern intervals occurring in the text,
//
// over the components built by the other modules: a phrase parse, balanced
// grammars for the text and for a reduced string around the phrase ends,
// anchored extraction at those ends, two tries (reversed phrases and boundary
// suffixes), a range-reporting grid, and the phrase-source interval structure.
//
// The index appends one sentinel byte (the smallest byte absent from the
// text) before parsing; all positions reported to callers refer to the
// original text and the sentinel is never returned, accepted in patterns, or
// reachable by extract.
//
// Two search modes: `verify` confirms every trie descent by extracting one
// candidate string (deterministic); `fingerprint` confirms descents with
// Karp-Rabin hashes (faster on long patterns, with a vanishing false-positive
// probability controlled by the prime exponent c).

#include <atomic>
#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "gsi/boundary_access.hpp"
#include "gsi/common.hpp"
#include "gsi/fingerprint.hpp"
#include "gsi/geometry.hpp"
#include "gsi/grammar.hpp"
#include "gsi/lz77.hpp"
#include "gsi/patricia.hpp"

namespace gsi {

enum class IndexMode : uint8_t { verify = 0, fingerprint = 1 };

struct BuildOptions {
  IndexMode mode = IndexMode::fingerprint;
  uint32_t c = 4;      // hash modulus is a random prime <= (n+1)^c
  uint64_t seed = 1;   // seeds the prime choice; build is deterministic
  const Slp* slp = nullptr;  // optional caller-supplied grammar for
                             // text+sentinel; must expand to it exactly
  uint32_t balance_c = 4;    // accepted height slack over ceil(log2 n)
};

enum class OccKind : uint8_t { primary = 0, secondary = 1 };

struct Occurrence {
  uint64_t pos = 0;  // 1-based start position in the original text
  OccKind kind = OccKind::primary;
  uint64_t via = 0;  // primary: index of the crossed phrase end;
                     // secondary: phrase whose copy produced it
  bool operator==(const Occurrence&) const = default;
};

struct QueryOptions {
  // Re-extract every reported occurrence and compare it to the pattern;
  // a mismatch (possible only through a hash collision in fingerprint mode)
  // becomes a verification-failed error. Costs O(occ * m) extra.
  bool verify_occurrences = false;
};

struct IndexStats {
  uint64_t n = 0;        // original text length
  uint64_t z = 0;        // number of phrases (sentinel included)
  uint64_t n_prime = 0;  // reduced string length
  uint64_t radius = 0;   // boundary window radius
  uint64_t rules_text = 0;     // grammar sizes (rule counts)
  uint64_t rules_reduced = 0;
  uint32_t height_text = 0;    // grammar heights
  uint32_t height_reduced = 0;
  uint64_t sigma = 0;  // alphabet size including the sentinel
  uint64_t q = 0;      // hash modulus
  IndexMode mode = IndexMode::fingerprint;
  uint64_t trie_rev_nodes = 0;
  uint64_t trie_suf_nodes = 0;
  uint64_t grid_nodes = 0;
  uint64_t source_entries = 0;
  uint64_t anchor_pairs = 0;     // extraction anchors
  uint64_t fp_anchor_pairs = 0;  // fingerprint anchors
};

struct SelfIndex {
  IndexMode mode = IndexMode::fingerprint;
  uint32_t c = 4;
  uint64_t seed = 1;
  uint8_t sentinel = 0;
  KrParams params;    // hash parameters (kept in both modes)
  lz77::Parse parse;  // over S = text + sentinel
  Slp slp_s;          // grammar over S
  SPrime sprime;      // reduced string around the phrase ends
  Slp slp_sp;         // grammar over the reduced string
  BookmarkSet marks;     // extraction anchors at the phrase ends
  BookmarkSet fp_marks;  // fingerprint anchors (fingerprint mode only)
  PatriciaTree trie_rev;  // reversed phrases
  PatriciaTree trie_suf;  // suffixes starting after each phrase end
  Grid grid;              // phrase points (reversed rank, suffix rank)
  SourceSet sources;      // phrase source intervals
  std::vector<Fp> sym_fwd;  // per-symbol hashes of the reduced grammar
  std::vector<Fp> sym_bwd;  // (fingerprint mode only)

  // How many anchored boundary queries the index has answered; queries on a
  // shared index may bump it concurrently.
  std::shared_ptr<std::atomic<uint64_t>> crossing_calls =
      std::make_shared<std::atomic<uint64_t>>(0);

  uint64_t n() const { return parse.n == 0 ? 0 : parse.n - 1; }
  uint64_t z() const { return parse.z(); }

  // Non-owning query facade over the components; cheap to assemble per call.
  BoundaryAccess access() const;

  bool operator==(const SelfIndex& o) const {
    return mode == o.mode && c == o.c && seed == o.seed &&
           sentinel == o.sentinel && params == o.params && parse == o.parse &&
           slp_s == o.slp_s && sprime == o.sprime && slp_sp == o.slp_sp &&
           marks == o.marks && fp_marks == o.fp_marks &&
           trie_rev == o.trie_rev && trie_suf == o.trie_suf &&
           grid == o.grid && sources == o.sources && sym_fwd == o.sym_fwd &&
           sym_bwd == o.sym_bwd;
  }
};

// Appends the sentinel, parses, and builds every component. Deterministic
// given (text, options). Errors: empty text -> invalid-input; text using all
// 256 byte values -> alphabet-error; supplied grammar not expanding to
// text+sentinel -> invalid-grammar; supplied grammar taller than
// balance_c * ceil(log2 |S|) in fingerprint mode -> balance-error.
SelfIndex build_index(ByteView text, const BuildOptions& opt = {});

// All occurrences of `pattern`, sorted by position, each exactly once.
// Errors: empty pattern or a pattern containing the sentinel byte ->
// invalid-input. Patterns with bytes absent from the text simply have no
// occurrences.
std::vector<Occurrence> locate(const SelfIndex& idx, ByteView pattern,
                               const QueryOptions& opt = {});

// Number of occurrences of `pattern` (same preconditions as locate).
uint64_t count(const SelfIndex& idx, ByteView pattern);

// The substring of the original text starting at 1-based position `i`,
// of length `len`; range-error beyond the text.
Bytes extract(const SelfIndex& idx, uint64_t i, uint64_t len);

// The sorted set of rotation offsets j in [0, m) such that the rotation
// pattern[j+1..m] pattern[1..j] occurs in the text.
std::vector<uint64_t> cyclic_matches(const SelfIndex& idx, ByteView pattern);

// All maximal intervals (h, j), 1-based inclusive, such that pattern[h..j]
// occurs in the text but neither pattern[h-1..j] nor pattern[h..j+1] does.
// Sorted by h.
std::vector<std::pair<uint64_t, uint64_t>> maximal_substrings(
    const SelfIndex& idx, ByteView pattern);

IndexStats stats(const SelfIndex& idx);

}  // namespace gsi
