#pragma once

// Range reporting for occurrence queries.
//
// Grid: z points, one per phrase — x is the phrase's rank among reversed
// phrases, y the rank of the suffix starting right after the phrase, both
// permutations of 1..z. The y-sequence ordered by x is stored in a wavelet
// tree, so a closed-rectangle report costs O((1 + hits) log z) and emptiness
// stops at the first hit.
//
// SourceSet: one entry per copying phrase, the interval its copied part was
// taken from. Entries are sorted by interval start and carry a sparse
// range-maximum table over interval ends, so listing every source interval
// that fully covers [s, e] costs O(log z + hits).

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "gsi/common.hpp"
#include "gsi/lz77.hpp"
#include "gsi/patricia.hpp"

namespace gsi {

struct GridPoint {
  uint32_t x = 0;
  uint32_t y = 0;
  uint32_t id = 0;  // payload: phrase index

  bool operator==(const GridPoint&) const = default;
};

struct WaveletNode {
  uint32_t lo = 0;  // value range covered, inclusive
  uint32_t hi = 0;
  uint32_t left = 0;   // child node ids; 0 = leaf (node 0 is the root,
  uint32_t right = 0;  // never a child)
  std::vector<uint32_t> ones;  // ones[i] = 1-bits among the first i bits;
                               // bit = 1 routes the value right

  bool operator==(const WaveletNode&) const = default;
};

struct Grid {
  std::vector<uint32_t> ys;           // ys[i] = y of the point at x = i + 1
  std::vector<uint32_t> phrase_by_y;  // payload of the point with y = i + 1
  std::vector<WaveletNode> nodes;

  uint32_t z() const { return uint32_t(ys.size()); }
  bool operator==(const Grid&) const = default;
};

// Grid over explicit points; x and y must each be a permutation of 1..z
// (invalid-input otherwise).
Grid make_grid(std::span<const GridPoint> points);

// Grid of the parse: phrase k gives the point
// (rank of reverse(phrase k), rank of the suffix after phrase k, k).
Grid build_grid(const lz77::Parse& parse, const PatriciaTree& trie_rev,
                const PatriciaTree& trie_suf);

// Payloads of the points inside [x1,x2] x [y1,y2] (closed; empty or inverted
// ranges give no hits). Order follows the wavelet-tree walk; callers needing
// sorted output sort. `max_hits` stops the walk early.
std::vector<uint32_t> report(const Grid& grid, uint64_t x1, uint64_t x2,
                             uint64_t y1, uint64_t y2,
                             uint64_t max_hits = UINT64_MAX);

bool is_empty(const Grid& grid, uint64_t x1, uint64_t x2, uint64_t y1,
              uint64_t y2);

struct SourceEntry {
  uint64_t src_start = 0;  // 1-based, inclusive
  uint64_t src_end = 0;
  uint64_t phrase_start = 0;  // where the copy landed
  uint32_t phrase = 0;

  bool operator==(const SourceEntry&) const = default;
};

struct SourceSet {
  std::vector<SourceEntry> entries;     // ascending by (src_start, phrase)
  std::vector<std::vector<uint32_t>> argmax;  // sparse table: argmax[j][i] =
                                              // index of the largest src_end
                                              // in entries[i .. i + 2^j)

  uint64_t size() const { return entries.size(); }
  bool operator==(const SourceSet&) const = default;
};

SourceSet build_sources(const lz77::Parse& parse);

// Rebuilds the sparse table (after deserializing entries).
void index_sources(SourceSet& sources);

// Every source interval with src_start <= s and src_end >= e, as
// (phrase, src_start) pairs. Requires 1 <= s <= e (range-error).
std::vector<std::pair<uint32_t, uint64_t>> covering(const SourceSet& sources,
                                                    uint64_t s, uint64_t e);

}  // namespace gsi
