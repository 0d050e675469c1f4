#include "gsi/patricia.hpp"

#include <algorithm>
#include <cassert>
#include <utility>

#include "suffix_internal.hpp"

namespace gsi {
namespace {

struct TmpNode {
  uint64_t depth = 0;
  int32_t parent = -1;
  std::vector<int32_t> kids;
  uint32_t attached = 0;
  uint32_t rank_lo = 0;
  uint32_t rank_hi = 0;
};

struct SortedLeaves {
  std::vector<uint32_t> order;  // leaf index -> phrase (1-based)
  std::vector<uint64_t> len;    // indexed-string lengths, by leaf index
  std::vector<uint64_t> lcp;    // lcp with the previous leaf (lcp[0] = 0)
};

// Character of phrase k's indexed string at a 0-based offset.
uint8_t string_char(TrieKind kind, ByteView text,
                    const std::vector<uint64_t>& ends, uint32_t k,
                    uint64_t off) {
  const uint64_t e = ends[size_t(k - 1)];
  return kind == TrieKind::boundary_suffixes ? uint8_t(text[size_t(e + off)])
                                             : uint8_t(text[size_t(e - 1 - off)]);
}

SortedLeaves sort_suffix_leaves(ByteView text, const lz77::Parse& parse,
                                uint8_t sentinel) {
  const uint64_t n = parse.n;
  const uint64_t z = parse.z();
  SortedLeaves out;
  out.lcp.assign(size_t(z), 0);
  out.order.reserve(size_t(z));
  out.len.reserve(size_t(z));
  // The final phrase ends at n, so exactly one suffix is empty; it sorts
  // first (a prefix sorts before its extensions).
  out.order.push_back(uint32_t(z));
  out.len.push_back(0);
  if (z == 1) return out;

  std::vector<uint16_t> coded(static_cast<size_t>(n));
  for (size_t i = 0; i < size_t(n); ++i)
    coded[i] = uint16_t(order_key(uint8_t(text[i]), sentinel));
  const auto sa = detail::suffix_array(coded);
  const auto rank = detail::invert_permutation(sa);
  const auto lcp = detail::lcp_array(coded, sa, rank);

  std::vector<std::pair<int64_t, uint32_t>> by_rank;  // (suffix rank, phrase)
  by_rank.reserve(size_t(z - 1));
  for (uint32_t k = 1; k <= uint32_t(z); ++k) {
    const uint64_t e = parse.ends[size_t(k - 1)];
    if (e < n) by_rank.emplace_back(rank[size_t(e)], k);
  }
  std::sort(by_rank.begin(), by_rank.end());
  std::vector<int64_t> marks;
  marks.reserve(by_rank.size());
  for (const auto& [r, k] : by_rank) marks.push_back(r);
  const auto adj = detail::adjacent_lcps(lcp, marks);
  for (size_t i = 0; i < by_rank.size(); ++i) {
    out.order.push_back(by_rank[i].second);
    out.len.push_back(n - parse.ends[size_t(by_rank[i].second - 1)]);
    if (i > 0) out.lcp[i + 1] = uint64_t(adj[i]);
  }
  return out;
}

SortedLeaves sort_reversed_leaves(ByteView text, const lz77::Parse& parse,
                                  uint8_t sentinel) {
  const uint64_t z = parse.z();
  std::vector<uint16_t> coded;
  coded.reserve(size_t(parse.n + z));
  std::vector<int64_t> pos(static_cast<size_t>(z));  // start of reverse(phrase k) in coded
  std::vector<uint64_t> plen(static_cast<size_t>(z));
  for (uint32_t k = 1; k <= uint32_t(z); ++k) {
    const uint64_t len = parse.phrases[size_t(k - 1)].length();
    const uint64_t e = parse.ends[size_t(k - 1)];
    plen[k - 1] = len;
    pos[k - 1] = int64_t(coded.size());
    for (uint64_t j = 0; j < len; ++j)
      coded.push_back(
          uint16_t(order_key(uint8_t(text[size_t(e - 1 - j)]), sentinel)));
    coded.push_back(0);  // terminator, below every byte
  }
  const auto sa = detail::suffix_array(coded);
  const auto rank = detail::invert_permutation(sa);
  const auto lcp = detail::lcp_array(coded, sa, rank);

  std::vector<std::pair<int64_t, uint32_t>> by_rank(static_cast<size_t>(z));
  for (uint32_t k = 1; k <= uint32_t(z); ++k)
    by_rank[k - 1] = {rank[size_t(pos[k - 1])], k};
  std::sort(by_rank.begin(), by_rank.end());
  std::vector<int64_t> marks(static_cast<size_t>(z));
  for (size_t i = 0; i < size_t(z); ++i) marks[i] = by_rank[i].first;
  const auto adj = detail::adjacent_lcps(lcp, marks);

  SortedLeaves out;
  out.order.resize(size_t(z));
  out.len.resize(size_t(z));
  out.lcp.assign(size_t(z), 0);
  for (size_t i = 0; i < size_t(z); ++i) {
    out.order[i] = by_rank[i].second;
    out.len[i] = plen[size_t(by_rank[i].second - 1)];
  }
  // A raw lcp reaching past min(len) means the terminators matched too, i.e.
  // the two strings are identical (only a trailing-less final phrase can
  // duplicate an earlier one). Cap the lcp and tie-break runs of identical
  // strings by phrase index.
  std::vector<char> equal_prev(size_t(z), 0);
  for (size_t i = 1; i < size_t(z); ++i) {
    const uint64_t mn = std::min(out.len[i - 1], out.len[i]);
    if (uint64_t(adj[i]) > mn) {
      equal_prev[i] = 1;
      out.lcp[i] = mn;
    } else {
      out.lcp[i] = uint64_t(adj[i]);
    }
  }
  for (size_t i = 1; i < size_t(z);) {
    if (!equal_prev[i]) {
      ++i;
      continue;
    }
    size_t e = i;
    while (e + 1 < size_t(z) && equal_prev[e + 1]) ++e;
    std::sort(out.order.begin() + int64_t(i) - 1, out.order.begin() + int64_t(e) + 1);
    i = e + 1;
  }
  return out;
}

}  // namespace

uint32_t PatriciaTree::child_by_key(uint32_t id, uint32_t key) const {
  const TrieNode& nd = nodes[size_t(id)];
  uint32_t lo = nd.child_begin;
  uint32_t hi = nd.child_end;
  while (lo < hi) {
    const uint32_t mid = lo + (hi - lo) / 2;
    if (nodes[size_t(mid)].key < key)
      lo = mid + 1;
    else
      hi = mid;
  }
  return lo < nd.child_end && nodes[size_t(lo)].key == key ? lo : 0;
}

std::optional<uint32_t> locus_node(const PatriciaTree& t, const DescentPath& p,
                                   uint64_t len) {
  if (len > p.reached) return std::nullopt;
  size_t lo = 0;
  size_t hi = p.nodes.size();
  while (lo < hi) {
    const size_t mid = (lo + hi) / 2;
    if (t.nodes[p.nodes[mid]].path_len < len)
      lo = mid + 1;
    else
      hi = mid;
  }
  if (lo == p.nodes.size()) return std::nullopt;
  return p.nodes[lo];
}

PatriciaTree build_patricia(TrieKind kind, ByteView text,
                            const lz77::Parse& parse, uint8_t sentinel,
                            const KrParams* fp) {
  if (parse.phrases.empty() || parse.n != text.size() ||
      parse.ends.size() != parse.phrases.size() || parse.ends.back() != parse.n)
    fail(errc::invalid_input, "parse does not describe the text");
  const SortedLeaves leaves = kind == TrieKind::boundary_suffixes
                                  ? sort_suffix_leaves(text, parse, sentinel)
                                  : sort_reversed_leaves(text, parse, sentinel);
  const uint32_t z = uint32_t(leaves.order.size());

  // Compacted trie from the sorted leaves and their adjacent lcps: keep the
  // rightmost root-to-leaf path on a stack, split edges where the next leaf
  // diverges, and record leaves equal to a node's path label as attached.
  std::vector<TmpNode> tmp(1);
  std::vector<int32_t> stk{0};
  for (uint32_t i = 0; i < z; ++i) {
    const uint64_t h = i == 0 ? 0 : leaves.lcp[i];
    int32_t last = -1;
    while (tmp[size_t(stk.back())].depth > h) {
      last = stk.back();
      stk.pop_back();
    }
    if (tmp[size_t(stk.back())].depth < h) {
      assert(last != -1);
      const int32_t u = int32_t(tmp.size());
      tmp.emplace_back();
      const int32_t par = tmp[size_t(last)].parent;
      tmp[size_t(u)].depth = h;
      tmp[size_t(u)].parent = par;
      tmp[size_t(par)].kids.back() = u;
      tmp[size_t(last)].parent = u;
      tmp[size_t(u)].kids.push_back(last);
      stk.push_back(u);
    }
    const int32_t top = stk.back();
    if (leaves.len[i] == h) {
      ++tmp[size_t(top)].attached;
    } else {
      const int32_t v = int32_t(tmp.size());
      tmp.emplace_back();
      tmp[size_t(v)].depth = leaves.len[i];
      tmp[size_t(v)].parent = top;
      tmp[size_t(v)].attached = 1;
      tmp[size_t(top)].kids.push_back(v);
      stk.push_back(v);
    }
  }

  // Leaf ranks: depth-first in child order; attached leaves take the first
  // ranks of each subtree.
  {
    struct Frame {
      int32_t node;
      size_t next;
    };
    uint32_t counter = tmp[0].attached;
    tmp[0].rank_lo = 1;
    std::vector<Frame> fst{{0, 0}};
    while (!fst.empty()) {
      Frame& f = fst.back();
      if (f.next < tmp[size_t(f.node)].kids.size()) {
        const int32_t c = tmp[size_t(f.node)].kids[f.next++];
        tmp[size_t(c)].rank_lo = counter + 1;
        counter += tmp[size_t(c)].attached;
        fst.push_back({c, 0});
      } else {
        tmp[size_t(f.node)].rank_hi = counter;
        fst.pop_back();
      }
    }
  }

  // Breadth-first relabeling keeps each node's children contiguous and, since
  // leaves were processed in sorted order, ascending by first-character key.
  std::vector<int32_t> bfs;
  bfs.reserve(tmp.size());
  bfs.push_back(0);
  for (size_t head = 0; head < bfs.size(); ++head)
    for (const int32_t c : tmp[size_t(bfs[head])].kids) bfs.push_back(c);
  assert(bfs.size() == tmp.size());
  std::vector<uint32_t> id_of(tmp.size());
  for (size_t i = 0; i < bfs.size(); ++i) id_of[size_t(bfs[i])] = uint32_t(i);

  PatriciaTree t;
  t.kind = kind;
  t.sentinel = sentinel;
  t.has_fps = fp != nullptr;
  t.leaf_order = leaves.order;
  t.leaf_rank.resize(size_t(z));
  for (uint32_t r = 1; r <= z; ++r)
    t.leaf_rank[size_t(leaves.order[r - 1] - 1)] = r;

  PrefixHashes ph;
  Bytes rev_text;
  if (fp) {
    if (kind == TrieKind::boundary_suffixes) {
      ph = prefix_hashes(*fp, text);
    } else {
      rev_text.assign(text.rbegin(), text.rend());
      ph = prefix_hashes(*fp, rev_text);
    }
  }

  const uint64_t n = parse.n;
  t.nodes.resize(tmp.size());
  for (size_t i = 0; i < bfs.size(); ++i) {
    const TmpNode& src = tmp[size_t(bfs[i])];
    TrieNode& dst = t.nodes[i];
    dst.parent = i == 0 ? 0 : id_of[size_t(src.parent)];
    dst.path_len = src.depth;
    dst.rank_lo = src.rank_lo;
    dst.rank_hi = src.rank_hi;
    dst.attached = src.attached;
    if (!src.kids.empty()) {
      dst.child_begin = id_of[size_t(src.kids.front())];
      dst.child_end = dst.child_begin + uint32_t(src.kids.size());
    }
    const uint32_t phrase = leaves.order[src.rank_lo - 1];
    if (i != 0) {
      const uint64_t par_depth = tmp[size_t(src.parent)].depth;
      dst.key = order_key(string_char(kind, text, parse.ends, phrase, par_depth),
                          sentinel);
    }
    if (fp && src.depth > 0) {
      const uint64_t e = parse.ends[size_t(phrase - 1)];
      // Suffix labels sit at text[e+1 .. e+depth]; reversed-phrase labels are
      // the reversed slice text[e-depth+1 .. e], i.e. positions n-e+1 ..
      // n-e+depth of the reversed text.
      dst.path_fp = kind == TrieKind::boundary_suffixes
                        ? substring_fp(*fp, ph, e + 1, e + src.depth)
                        : substring_fp(*fp, ph, n - e + 1, n - e + src.depth);
    }
  }
  return t;
}

}  // namespace gsi
