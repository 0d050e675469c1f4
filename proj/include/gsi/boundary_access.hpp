#pragma once

// Fast access around phrase boundaries.
//
// The reduced string keeps, for each phrase end e, the window
// [e - radius, e + radius] of the text (windows merged where they meet); a
// balanced grammar over the reduced string plus per-boundary anchors
// ("bookmarks") then supports, for ranges that cross a boundary and stay
// inside its window:
//   - extraction in O(len + log len) independent of the text length,
//   - decomposition into O(log) grammar symbols whose expansions tile the
//     range, and
//   - O(log)-symbol fingerprint assembly (forward or reversed), using a
//     second anchor family tuned to square-root level sizes.
//
// An anchor at level L pins, for ranges of length <= L that end at the
// boundary leaf (left anchor) or start just after it (right anchor), two
// grammar nodes of height O(log L) whose expansions cover the range; ranges
// longer than every level fall back to a root descent, which still costs only
// O(len + log n').

#include <atomic>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gsi/common.hpp"
#include "gsi/fingerprint.hpp"
#include "gsi/grammar.hpp"
#include "gsi/lz77.hpp"

namespace gsi {

struct SPrimeInterval {
  uint64_t s_begin = 0;   // first original position kept (1-based)
  uint64_t s_end = 0;     // last original position kept
  uint64_t sp_begin = 0;  // its position in the reduced string

  bool operator==(const SPrimeInterval&) const = default;
};

struct SPrime {
  Bytes text;  // the reduced string
  uint64_t radius = 0;
  std::vector<SPrimeInterval> intervals;  // ascending, disjoint, merged
  std::vector<uint64_t> boundary_pos;     // reduced position of each phrase end

  uint64_t n_prime() const { return text.size(); }
  // Original -> reduced (nullopt when the position was dropped).
  std::optional<uint64_t> to_reduced(uint64_t s) const;
  // Reduced -> original; out of range -> range-error.
  uint64_t to_original(uint64_t sp) const;

  bool operator==(const SPrime&) const = default;
};

uint64_t default_radius(uint64_t n);

SPrime build_sprime(ByteView text, const lz77::Parse& parse, uint64_t radius);

// Anchor level schedules (ascending, deduplicated, minimum level 2):
// extraction levels shrink by repeated ceil(log2 .), fingerprint levels by
// repeated square roots.
std::vector<uint64_t> extraction_levels(uint64_t n_prime);
std::vector<uint64_t> fingerprint_levels(uint64_t n_prime);

struct Anchor {
  Symbol v = kNoSymbol;  // node left of the pinned split
  Symbol w = kNoSymbol;  // node right of the pinned split
  uint64_t off = 0;      // right anchor: leaf's offset inside v;
                         // left anchor: leaf's offset inside w

  bool operator==(const Anchor&) const = default;
};

struct AnchorPair {
  Anchor right;  // serves ranges starting just after the boundary leaf
  Anchor left;   // serves ranges ending at the boundary leaf

  bool operator==(const AnchorPair&) const = default;
};

struct BookmarkSet {
  std::vector<uint64_t> levels;     // ascending
  std::vector<AnchorPair> anchors;  // position-major: [pos * levels + level]

  const AnchorPair& at(uint64_t pos_idx, uint64_t level_idx) const {
    return anchors[size_t(pos_idx * levels.size() + level_idx)];
  }
  bool operator==(const BookmarkSet&) const = default;
};

// Anchors for every (position, level). Positions are 1-based leaves of the
// grammar's expansion. The grammar must be balanced: height within balance_c
// times ceil(log2 n), else balance-error.
BookmarkSet build_bookmarks(const Slp& slp, std::span<const uint64_t> positions,
                            std::span<const uint64_t> levels,
                            uint32_t balance_c = 4);

// Query-time facade wiring the pieces together (non-owning).
struct BoundaryAccess {
  const Slp* slp_s = nullptr;        // grammar of the full text
  const Slp* slp_sp = nullptr;       // grammar of the reduced string
  const SPrime* sprime = nullptr;
  const BookmarkSet* marks = nullptr;     // extraction anchors
  const BookmarkSet* fp_marks = nullptr;  // fingerprint anchors (optional)
  const std::vector<uint64_t>* ends = nullptr;
  uint64_t n = 0;  // text length
  const KrParams* params = nullptr;            // optional
  const std::vector<Fp>* sym_fwd = nullptr;    // per-symbol fps of slp_sp
  const std::vector<Fp>* sym_bwd = nullptr;
  std::atomic<uint64_t>* crossing_calls = nullptr;  // instrumentation

  // Text range [s, s+len-1] must overlap the seam of boundary k (1-based):
  // s <= e_k + 1 and s + len - 1 >= e_k, and stay inside the window
  // [e_k - radius, e_k + radius]; otherwise routing-error.
  Bytes extract_crossing(uint64_t k, uint64_t s, uint64_t len) const;
  std::vector<Symbol> decompose(uint64_t k, uint64_t s, uint64_t len) const;
  Fp fp_crossing(uint64_t k, uint64_t s, uint64_t len, Direction dir) const;

  // Whole-text extraction: routes through a boundary window when one fits,
  // else through the full-text grammar.
  Bytes extract_any(uint64_t s, uint64_t len) const;

 private:
  struct Routed {
    uint64_t e;         // boundary end position in the text
    uint64_t sp;        // its reduced position
    uint64_t left_len;  // part of the range at or before e
    uint64_t right_len;
  };
  Routed route(uint64_t k, uint64_t s, uint64_t len) const;
  void emit_left(const BookmarkSet& bm, uint64_t k0, uint64_t ll, Bytes& out) const;
  void emit_right(const BookmarkSet& bm, uint64_t k0, uint64_t rl, Bytes& out) const;
  void pieces_left(const BookmarkSet& bm, uint64_t k0, uint64_t ll,
                   std::vector<Symbol>& out) const;
  void pieces_right(const BookmarkSet& bm, uint64_t k0, uint64_t rl,
                    std::vector<Symbol>& out) const;
};

}  // namespace gsi
