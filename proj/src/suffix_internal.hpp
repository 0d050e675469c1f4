#pragma once

// Internal suffix-array machinery shared by the parser and the trie builders.
// Not part of the public API.

#include <cstdint>
#include <span>
#include <vector>

#include "gsi/common.hpp"

namespace gsi::detail {

// Suffix array of a sequence over a small integer alphabet, O(n log n)
// prefix-doubling with counting sorts. Returns 0-based suffix start positions
// in lexicographic order. Empty input gives an empty array.
std::vector<int32_t> suffix_array(std::span<const uint16_t> s);
std::vector<int32_t> suffix_array_bytes(ByteView s);

// rank[i] = position of suffix i in the suffix array.
std::vector<int32_t> invert_permutation(const std::vector<int32_t>& sa);

// Kasai: lcp[j] = longest common prefix of suffixes sa[j-1] and sa[j]
// (lcp[0] = 0). Same length as sa.
std::vector<int32_t> lcp_array(std::span<const uint16_t> s,
                               const std::vector<int32_t>& sa,
                               const std::vector<int32_t>& rank);
std::vector<int32_t> lcp_array_bytes(ByteView s, const std::vector<int32_t>& sa,
                                     const std::vector<int32_t>& rank);

// Min segment tree over an int32 array with downward-threshold searches.
class MinSegTree {
 public:
  MinSegTree() = default;
  explicit MinSegTree(const std::vector<int32_t>& values);

  // Minimum over values[l..r] inclusive; l > r gives INT32_MAX.
  int32_t range_min(int64_t l, int64_t r) const;
  // Largest j <= r with values[j] < threshold, or -1.
  int64_t last_below(int64_t r, int32_t threshold) const;
  // Smallest j >= l with values[j] < threshold, or -1.
  int64_t first_below(int64_t l, int32_t threshold) const;

  int64_t size() const { return n_; }

 private:
  int64_t n_ = 0;
  int64_t base_ = 1;  // leaves start at base_
  std::vector<int32_t> tree_;
};

// Longest common prefixes between *consecutive marked suffixes*: given the
// full lcp array and an ascending list of suffix-array ranks, returns for each
// adjacent pair of marks the min of lcp over the open-left interval between
// them, in one linear sweep (result[i] = lcp of marks[i-1], marks[i];
// result[0] = 0).
std::vector<int64_t> adjacent_lcps(const std::vector<int32_t>& lcp,
                                   const std::vector<int64_t>& marks);

}  // namespace gsi::detail
