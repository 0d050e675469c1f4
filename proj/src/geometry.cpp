#include "gsi/geometry.hpp"

#include <algorithm>
#include <bit>
#include <cassert>

namespace gsi {
namespace {

// Builds the wavelet node for values[lo..hi] over `seq`, returning its id.
// Splits seq stably by the midpoint into the child sequences.
uint32_t build_wavelet(std::vector<WaveletNode>& nodes, uint32_t lo,
                       uint32_t hi, std::vector<uint32_t>&& seq) {
  const uint32_t id = uint32_t(nodes.size());
  nodes.emplace_back();
  nodes[id].lo = lo;
  nodes[id].hi = hi;
  if (lo == hi) return id;
  const uint32_t mid = lo + (hi - lo) / 2;
  std::vector<uint32_t> ones(seq.size() + 1, 0);
  std::vector<uint32_t> left_seq;
  std::vector<uint32_t> right_seq;
  for (size_t i = 0; i < seq.size(); ++i) {
    const bool right = seq[i] > mid;
    ones[i + 1] = ones[i] + (right ? 1 : 0);
    (right ? right_seq : left_seq).push_back(seq[i]);
  }
  nodes[id].ones = std::move(ones);
  seq.clear();
  seq.shrink_to_fit();
  const uint32_t l = build_wavelet(nodes, lo, mid, std::move(left_seq));
  nodes[id].left = l;
  const uint32_t r = build_wavelet(nodes, mid + 1, hi, std::move(right_seq));
  nodes[id].right = r;
  return id;
}

}  // namespace

Grid make_grid(std::span<const GridPoint> points) {
  const uint32_t z = uint32_t(points.size());
  Grid g;
  if (z == 0) fail(errc::invalid_input, "a grid needs at least one point");
  g.ys.assign(z, 0);
  g.phrase_by_y.assign(z, 0);
  std::vector<char> seen_y(size_t(z) + 1, 0);
  for (const GridPoint& p : points) {
    if (p.x < 1 || p.x > z || p.y < 1 || p.y > z || g.ys[p.x - 1] != 0 ||
        seen_y[p.y])
      fail(errc::invalid_input, "grid coordinates must be permutations");
    g.ys[p.x - 1] = p.y;
    g.phrase_by_y[p.y - 1] = p.id;
    seen_y[p.y] = 1;
  }
  std::vector<uint32_t> seq = g.ys;
  build_wavelet(g.nodes, 1, z, std::move(seq));
  return g;
}

Grid build_grid(const lz77::Parse& parse, const PatriciaTree& trie_rev,
                const PatriciaTree& trie_suf) {
  const uint32_t z = uint32_t(parse.z());
  if (trie_rev.z() != z || trie_suf.z() != z)
    fail(errc::invalid_input, "tries and parse disagree on the phrase count");
  std::vector<GridPoint> pts(z);
  for (uint32_t k = 1; k <= z; ++k) {
    pts[k - 1] = GridPoint{trie_rev.leaf_rank[k - 1],
                           trie_suf.leaf_rank[k - 1], k};
  }
  return make_grid(pts);
}

std::vector<uint32_t> report(const Grid& grid, uint64_t x1, uint64_t x2,
                             uint64_t y1, uint64_t y2, uint64_t max_hits) {
  std::vector<uint32_t> out;
  const uint32_t z = grid.z();
  if (max_hits == 0 || x1 > x2 || y1 > y2 || x1 > z || y1 > z) return out;
  x2 = std::min<uint64_t>(x2, z);
  y2 = std::min<uint64_t>(y2, z);
  x1 = std::max<uint64_t>(x1, 1);
  y1 = std::max<uint64_t>(y1, 1);

  // Depth-first over wavelet nodes; [l, r) is the position interval of the
  // surviving points inside the node's sequence.
  struct Pending {
    uint32_t node;
    uint32_t l, r;
  };
  std::vector<Pending> stack;
  stack.push_back({0, uint32_t(x1 - 1), uint32_t(x2)});
  while (!stack.empty()) {
    const Pending p = stack.back();
    stack.pop_back();
    if (p.l >= p.r) continue;
    const WaveletNode& nd = grid.nodes[p.node];
    if (nd.hi < y1 || nd.lo > y2) continue;
    if (nd.lo == nd.hi) {
      // ys is a permutation, so a leaf holds exactly one point; reaching it
      // with a nonempty position interval means the point lies in the
      // rectangle.
      out.push_back(grid.phrase_by_y[nd.lo - 1]);
      if (out.size() >= max_hits) break;
      continue;
    }
    const uint32_t lones = nd.ones[p.l];
    const uint32_t rones = nd.ones[p.r];
    // Right child first so the left child's hits pop first (no ordering
    // contract either way).
    stack.push_back({nd.right, lones, rones});
    stack.push_back({nd.left, p.l - lones, p.r - rones});
  }
  return out;
}

bool is_empty(const Grid& grid, uint64_t x1, uint64_t x2, uint64_t y1,
              uint64_t y2) {
  return report(grid, x1, x2, y1, y2, 1).empty();
}

SourceSet build_sources(const lz77::Parse& parse) {
  SourceSet s;
  for (uint32_t k = 1; k <= uint32_t(parse.z()); ++k) {
    const lz77::Phrase& ph = parse.phrases[k - 1];
    if (ph.copy_len == 0) continue;
    s.entries.push_back(SourceEntry{ph.source_start,
                                    ph.source_start + ph.copy_len - 1,
                                    ph.start, k});
  }
  std::sort(s.entries.begin(), s.entries.end(),
            [](const SourceEntry& a, const SourceEntry& b) {
              return a.src_start != b.src_start ? a.src_start < b.src_start
                                                : a.phrase < b.phrase;
            });
  index_sources(s);
  return s;
}

void index_sources(SourceSet& sources) {
  const size_t n = sources.entries.size();
  sources.argmax.clear();
  if (n == 0) return;
  const auto& e = sources.entries;
  sources.argmax.emplace_back(n);
  auto& level0 = sources.argmax.back();
  for (size_t i = 0; i < n; ++i) level0[i] = uint32_t(i);
  for (size_t half = 1; half * 2 <= n; half *= 2) {
    const auto& prev = sources.argmax.back();
    std::vector<uint32_t> next(n - half * 2 + 1);
    for (size_t i = 0; i + half * 2 <= n; ++i) {
      const uint32_t a = prev[i];
      const uint32_t b = prev[i + half];
      next[i] = e[b].src_end > e[a].src_end ? b : a;
    }
    sources.argmax.push_back(std::move(next));
  }
}

namespace {

// Index of the entry with the largest src_end among entries[l..r], inclusive.
uint32_t range_argmax(const SourceSet& s, uint32_t l, uint32_t r) {
  const uint32_t len = r - l + 1;
  const uint32_t j = uint32_t(std::bit_width(len) - 1);
  const uint32_t a = s.argmax[j][l];
  const uint32_t b = s.argmax[j][r + 1 - (uint32_t(1) << j)];
  return s.entries[b].src_end > s.entries[a].src_end ? b : a;
}

}  // namespace

std::vector<std::pair<uint32_t, uint64_t>> covering(const SourceSet& sources,
                                                    uint64_t s, uint64_t e) {
  if (s < 1 || s > e) fail(errc::range_error, "covering needs 1 <= s <= e");
  std::vector<std::pair<uint32_t, uint64_t>> out;
  if (sources.entries.empty()) return out;
  // Prefix of entries with src_start <= s.
  const auto& v = sources.entries;
  size_t lo = 0;
  size_t hi = v.size();
  while (lo < hi) {
    const size_t mid = (lo + hi) / 2;
    if (v[mid].src_start <= s)
      lo = mid + 1;
    else
      hi = mid;
  }
  if (lo == 0) return out;
  // Recursive argmax descent: every entry in the prefix with src_end >= e.
  std::vector<std::pair<uint32_t, uint32_t>> stack{{0, uint32_t(lo - 1)}};
  while (!stack.empty()) {
    const auto [l, r] = stack.back();
    stack.pop_back();
    if (l > r) continue;
    const uint32_t m = range_argmax(sources, l, r);
    if (v[m].src_end < e) continue;
    out.emplace_back(v[m].phrase, v[m].src_start);
    if (m > l) stack.push_back({l, m - 1});
    if (m < r) stack.push_back({m + 1, r});
  }
  return out;
}

}  // namespace gsi
