#include "suffix_internal.hpp"

#include <algorithm>
#include <limits>

namespace gsi::detail {

std::vector<int32_t> suffix_array(std::span<const uint16_t> s) {
  const int64_t n = int64_t(s.size());
  std::vector<int32_t> sa(n), rnk(n), tmp(n);
  if (n == 0) return sa;
  if (n == 1) {
    sa[0] = 0;
    return sa;
  }

  int32_t alpha = 0;
  for (uint16_t v : s) alpha = std::max<int32_t>(alpha, int32_t(v) + 1);
  std::vector<int32_t> cnt(size_t(std::max<int64_t>(alpha, n)) + 1, 0);

  // Initial counting sort by first character.
  for (int64_t i = 0; i < n; ++i) cnt[s[size_t(i)]]++;
  for (int32_t c = 1; c < alpha; ++c) cnt[size_t(c)] += cnt[size_t(c) - 1];
  for (int64_t i = n - 1; i >= 0; --i) sa[size_t(--cnt[s[size_t(i)]])] = int32_t(i);
  rnk[size_t(sa[0])] = 0;
  for (int64_t i = 1; i < n; ++i)
    rnk[size_t(sa[size_t(i)])] =
        rnk[size_t(sa[size_t(i - 1)])] + (s[size_t(sa[size_t(i)])] != s[size_t(sa[size_t(i - 1)])] ? 1 : 0);

  for (int64_t k = 1; k < n; k <<= 1) {
    if (rnk[size_t(sa[size_t(n - 1)])] == n - 1) break;
    // Stable bucket sort by second key (rank at i+k, absent = smallest):
    // suffixes n-k..n-1 first, then the rest in current order shifted by k.
    int64_t p = 0;
    for (int64_t i = n - k; i < n; ++i) tmp[size_t(p++)] = int32_t(i);
    for (int64_t i = 0; i < n; ++i)
      if (sa[size_t(i)] >= k) tmp[size_t(p++)] = sa[size_t(i)] - int32_t(k);
    // Stable counting sort by first key (current rank).
    const int32_t buckets = rnk[size_t(sa[size_t(n - 1)])] + 1;
    std::fill(cnt.begin(), cnt.begin() + buckets + 1, 0);
    for (int64_t i = 0; i < n; ++i) cnt[size_t(rnk[size_t(i)]) + 1]++;
    for (int32_t c = 1; c <= buckets; ++c) cnt[size_t(c)] += cnt[size_t(c) - 1];
    for (int64_t i = 0; i < n; ++i)
      sa[size_t(cnt[size_t(rnk[size_t(tmp[size_t(i)])])]++)] = tmp[size_t(i)];
    // Re-rank by (rank, rank+k) pairs.
    std::vector<int32_t> newr(n);
    newr[size_t(sa[0])] = 0;
    for (int64_t i = 1; i < n; ++i) {
      const int32_t a = sa[size_t(i - 1)], b = sa[size_t(i)];
      const int32_t a2 = a + k < n ? rnk[size_t(a + k)] : -1;
      const int32_t b2 = b + k < n ? rnk[size_t(b + k)] : -1;
      newr[size_t(b)] =
          newr[size_t(a)] + ((rnk[size_t(a)] != rnk[size_t(b)] || a2 != b2) ? 1 : 0);
    }
    rnk.swap(newr);
  }
  return sa;
}

std::vector<int32_t> suffix_array_bytes(ByteView s) {
  std::vector<uint16_t> v(s.size());
  for (size_t i = 0; i < s.size(); ++i) v[i] = uint16_t(uint8_t(s[i]));
  return suffix_array(v);
}

std::vector<int32_t> invert_permutation(const std::vector<int32_t>& sa) {
  std::vector<int32_t> rank(sa.size());
  for (size_t i = 0; i < sa.size(); ++i) rank[size_t(sa[i])] = int32_t(i);
  return rank;
}

std::vector<int32_t> lcp_array(std::span<const uint16_t> s,
                               const std::vector<int32_t>& sa,
                               const std::vector<int32_t>& rank) {
  const int64_t n = int64_t(s.size());
  std::vector<int32_t> lcp(sa.size(), 0);
  int64_t h = 0;
  for (int64_t i = 0; i < n; ++i) {
    const int32_t r = rank[size_t(i)];
    if (r == 0) {
      h = 0;
      continue;
    }
    const int64_t j = sa[size_t(r - 1)];
    if (h > 0) --h;
    while (i + h < n && j + h < n && s[size_t(i + h)] == s[size_t(j + h)]) ++h;
    lcp[size_t(r)] = int32_t(h);
  }
  return lcp;
}

std::vector<int32_t> lcp_array_bytes(ByteView s, const std::vector<int32_t>& sa,
                                     const std::vector<int32_t>& rank) {
  std::vector<uint16_t> v(s.size());
  for (size_t i = 0; i < s.size(); ++i) v[i] = uint16_t(uint8_t(s[i]));
  return lcp_array(v, sa, rank);
}

MinSegTree::MinSegTree(const std::vector<int32_t>& values) : n_(int64_t(values.size())) {
  base_ = 1;
  while (base_ < std::max<int64_t>(n_, 1)) base_ <<= 1;
  tree_.assign(size_t(2 * base_), std::numeric_limits<int32_t>::max());
  for (int64_t i = 0; i < n_; ++i) tree_[size_t(base_ + i)] = values[size_t(i)];
  for (int64_t i = base_ - 1; i >= 1; --i)
    tree_[size_t(i)] = std::min(tree_[size_t(2 * i)], tree_[size_t(2 * i + 1)]);
}

int32_t MinSegTree::range_min(int64_t l, int64_t r) const {
  int32_t best = std::numeric_limits<int32_t>::max();
  if (l < 0) l = 0;
  if (r >= n_) r = n_ - 1;
  if (l > r) return best;
  int64_t lo = l + base_, hi = r + base_ + 1;
  while (lo < hi) {
    if (lo & 1) best = std::min(best, tree_[size_t(lo++)]);
    if (hi & 1) best = std::min(best, tree_[size_t(--hi)]);
    lo >>= 1;
    hi >>= 1;
  }
  return best;
}

int64_t MinSegTree::last_below(int64_t r, int32_t threshold) const {
  if (r >= n_) r = n_ - 1;
  if (r < 0) return -1;
  // Collect canonical nodes of [0, r] left to right, then descend into the
  // rightmost one holding a value below the threshold.
  int64_t lo = base_, hi = r + base_ + 1;
  int64_t segs[128];
  int n_left = 0, n_right = 0;
  int64_t right_segs[128];
  while (lo < hi) {
    if (lo & 1) segs[n_left++] = lo++;
    if (hi & 1) right_segs[n_right++] = --hi;
    lo >>= 1;
    hi >>= 1;
  }
  // Right-side canonical nodes were collected outermost-first; scan them
  // rightmost-first, then the left-side ones rightmost-first.
  for (int t = 0; t < n_right; ++t) {
    int64_t node = right_segs[t];
    if (tree_[size_t(node)] < threshold) {
      while (node < base_)
        node = tree_[size_t(2 * node + 1)] < threshold ? 2 * node + 1 : 2 * node;
      return node - base_;
    }
  }
  for (int t = n_left - 1; t >= 0; --t) {
    int64_t node = segs[t];
    if (tree_[size_t(node)] < threshold) {
      while (node < base_)
        node = tree_[size_t(2 * node + 1)] < threshold ? 2 * node + 1 : 2 * node;
      return node - base_;
    }
  }
  return -1;
}

int64_t MinSegTree::first_below(int64_t l, int32_t threshold) const {
  if (l < 0) l = 0;
  if (l >= n_) return -1;
  int64_t lo = l + base_, hi = n_ + base_;
  int64_t left_segs[128], right_segs[128];
  int n_left = 0, n_right = 0;
  while (lo < hi) {
    if (lo & 1) left_segs[n_left++] = lo++;
    if (hi & 1) right_segs[n_right++] = --hi;
    lo >>= 1;
    hi >>= 1;
  }
  auto descend = [&](int64_t node) {
    while (node < base_)
      node = tree_[size_t(2 * node)] < threshold ? 2 * node : 2 * node + 1;
    return node - base_;
  };
  for (int t = 0; t < n_left; ++t)
    if (tree_[size_t(left_segs[t])] < threshold) return descend(left_segs[t]);
  for (int t = n_right - 1; t >= 0; --t)
    if (tree_[size_t(right_segs[t])] < threshold) return descend(right_segs[t]);
  return -1;
}

std::vector<int64_t> adjacent_lcps(const std::vector<int32_t>& lcp,
                                   const std::vector<int64_t>& marks) {
  std::vector<int64_t> out(marks.size(), 0);
  for (size_t t = 1; t < marks.size(); ++t) {
    int64_t m = std::numeric_limits<int32_t>::max();
    for (int64_t j = marks[t - 1] + 1; j <= marks[t]; ++j)
      m = std::min<int64_t>(m, lcp[size_t(j)]);
    out[t] = m;
  }
  return out;
}

}  // namespace gsi::detail
