#pragma once

// Greedy non-self-referential LZ77 parsing.
//
// Each phrase is the longest prefix of the remaining input that also occurs
// somewhere *entirely before* the phrase's start (leftmost such occurrence is
// recorded as the source), extended by one trailing literal character when the
// input has not been exhausted. A phrase with no copyable prefix (first
// occurrence of a character) is a bare literal. Positions are 1-based.

#include <cstdint>
#include <optional>
#include <vector>

#include "gsi/common.hpp"

namespace gsi::lz77 {

struct Phrase {
  uint64_t start = 0;     // 1-based position of the phrase in the text
  uint64_t copy_len = 0;  // length of the copied part (0 for bare literals)
  uint64_t source_start = 0;  // 1-based start of the leftmost earlier
                              // occurrence; 0 when copy_len == 0
  std::optional<unsigned char> trailing;  // literal after the copied part

  uint64_t length() const { return copy_len + (trailing ? 1 : 0); }
  bool operator==(const Phrase&) const = default;
};

struct Parse {
  std::vector<Phrase> phrases;
  uint64_t n = 0;              // text length
  std::vector<uint64_t> ends;  // ends[k] = 1-based end position of phrase k

  uint64_t z() const { return phrases.size(); }
  bool operator==(const Parse&) const = default;
};

// Parses the text. O(n log n) time via a suffix array plus two segment trees;
// each phrase costs O(log^2 n) on top. Empty input -> invalid-input.
Parse parse(ByteView text);

// Reassembles the text from a parse, validating the structural invariants
// (tiling, source entirely before the phrase, positions in range). Any
// violation -> corrupt-parse.
Bytes decode(const Parse& parse);

}  // namespace gsi::lz77
