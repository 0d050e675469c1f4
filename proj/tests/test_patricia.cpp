#include "gsi/patricia.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "gsi/fingerprint.hpp"
#include "gsi/lz77.hpp"
#include "support/util.hpp"

using namespace gsi;

namespace {

constexpr const char* kExample = "abaababaabaab$";

// The z strings a tree of this kind indexes, materialized (test oracle only).
std::vector<Bytes> leaf_strings(TrieKind kind, const Bytes& text,
                                const lz77::Parse& parse) {
  std::vector<Bytes> out;
  for (size_t k = 0; k < parse.z(); ++k) {
    if (kind == TrieKind::boundary_suffixes) {
      out.push_back(text.substr(size_t(parse.ends[k])));
    } else {
      Bytes s = text.substr(size_t(parse.phrases[k].start - 1),
                            size_t(parse.phrases[k].length()));
      std::reverse(s.begin(), s.end());
      out.push_back(s);
    }
  }
  return out;
}

bool dec_less(const Bytes& a, const Bytes& b, uint8_t sent) {
  const size_t m = std::min(a.size(), b.size());
  for (size_t i = 0; i < m; ++i) {
    const uint32_t ka = order_key(uint8_t(a[i]), sent);
    const uint32_t kb = order_key(uint8_t(b[i]), sent);
    if (ka != kb) return ka < kb;
  }
  return a.size() < b.size();
}

std::vector<uint32_t> naive_order(const std::vector<Bytes>& strs,
                                  uint8_t sent) {
  std::vector<uint32_t> ord(strs.size());
  std::iota(ord.begin(), ord.end(), 1u);
  std::stable_sort(ord.begin(), ord.end(), [&](uint32_t a, uint32_t b) {
    return dec_less(strs[a - 1], strs[b - 1], sent);
  });
  return ord;
}

LexRange naive_range(const std::vector<Bytes>& strs,
                     const std::vector<uint32_t>& ord, ByteView piece) {
  LexRange r{};
  for (uint32_t rank = 1; rank <= uint32_t(ord.size()); ++rank) {
    const Bytes& s = strs[ord[rank - 1] - 1];
    if (s.size() >= piece.size() &&
        ByteView(s).substr(0, piece.size()) == piece) {
      if (r.empty()) r.lo = rank;
      REQUIRE((r.empty() || r.hi == rank - 1));  // matches are contiguous
      r.hi = rank;
    }
  }
  return r;
}

// Everything needed to run both search modes against one text.
struct TrieRig {
  Bytes text;
  lz77::Parse parse;
  KrParams params;
  PatriciaTree rev;
  PatriciaTree suf;
  std::vector<Bytes> rev_strs;
  std::vector<Bytes> suf_strs;

  explicit TrieRig(Bytes t, uint8_t sent = '$') : text(std::move(t)) {
    parse = lz77::parse(text);
    Bytes body;
    for (const char c : text)
      if (uint8_t(c) != sent) body.push_back(c);
    params = make_params(body, sent, 4, 20260819);
    rev = build_patricia(TrieKind::reversed_phrases, text, parse, sent, &params);
    suf = build_patricia(TrieKind::boundary_suffixes, text, parse, sent, &params);
    rev_strs = leaf_strings(TrieKind::reversed_phrases, text, parse);
    suf_strs = leaf_strings(TrieKind::boundary_suffixes, text, parse);
  }

  const std::vector<Bytes>& strs(const PatriciaTree& t) const {
    return t.kind == TrieKind::reversed_phrases ? rev_strs : suf_strs;
  }

  LexRange verify(const PatriciaTree& t, ByteView piece) const {
    return search_verify(t, piece, [&](uint32_t k, uint64_t len) {
      return strs(t)[k - 1].substr(0, size_t(len));
    });
  }

  LexRange fp_search(const PatriciaTree& t, ByteView piece) const {
    // A byte outside the alphabet occurs in no indexed string; the index
    // screens patterns the same way before fingerprinting them.
    for (const char c : piece)
      if (params.char_map[uint8_t(c)] < 0) return LexRange{};
    const PrefixHashes ph = prefix_hashes(params, piece);
    return search_fp(
        t, piece.size(), [&](uint64_t i) { return piece[size_t(i)]; },
        [&](uint64_t len) { return substring_fp(params, ph, 1, len); },
        [&](uint32_t k, uint64_t len) {
          return fp_of(params, ByteView(strs(t)[k - 1]).substr(0, size_t(len)));
        });
  }
};

}  // namespace

TEST_CASE("leaf orders on the running example") {
  TrieRig r(kExample);
  CHECK(r.rev.leaf_order == std::vector<uint32_t>{6, 1, 3, 5, 2, 4});
  CHECK(r.suf.leaf_order == std::vector<uint32_t>{6, 4, 2, 5, 1, 3});
  CHECK(r.rev.leaf_rank == std::vector<uint32_t>{2, 5, 3, 6, 4, 1});
  CHECK(r.suf.leaf_rank == std::vector<uint32_t>{5, 3, 6, 2, 4, 1});
  CHECK(r.rev.z() == 6);
  CHECK(r.suf.z() == 6);
}

TEST_CASE("node structure on the running example") {
  TrieRig r(kExample);

  // Reversed phrases: $b | a > aa > aabaa | b > bab.
  CHECK(r.rev.nodes.size() == 7);
  CHECK(r.rev.root().rank_lo == 1);
  CHECK(r.rev.root().rank_hi == 6);
  CHECK(r.rev.root().attached == 0);
  CHECK(r.rev.root().child_end - r.rev.root().child_begin == 3);

  // Suffixes: the empty suffix attaches to the root.
  CHECK(r.suf.nodes.size() == 9);
  CHECK(r.suf.root().attached == 1);
  CHECK(r.suf.root().rank_lo == 1);
  CHECK(r.suf.root().rank_hi == 6);
  CHECK(r.suf.root().child_end - r.suf.root().child_begin == 2);

  // Node depths seen along "b": the depth-1 branch has children '$' and 'a'.
  const uint32_t b = r.suf.child_by_key(0, order_key('b', '$'));
  REQUIRE(b != 0);
  CHECK(r.suf.nodes[b].path_len == 1);
  CHECK(r.suf.nodes[b].rank_lo == 4);
  CHECK(r.suf.nodes[b].rank_hi == 6);
  CHECK(r.suf.child_by_key(b, order_key('$', '$')) != 0);
  CHECK(r.suf.child_by_key(b, order_key('a', '$')) != 0);
  CHECK(r.suf.child_by_key(b, order_key('b', '$')) == 0);

  for (const PatriciaTree* t : {&r.rev, &r.suf}) {
    for (size_t i = 1; i < t->nodes.size(); ++i) {
      const TrieNode& nd = t->nodes[i];
      const TrieNode& par = t->nodes[nd.parent];
      CHECK(par.path_len < nd.path_len);
      CHECK(par.rank_lo <= nd.rank_lo);
      CHECK(nd.rank_hi <= par.rank_hi);
      const uint32_t kids = nd.child_end - nd.child_begin;
      CHECK((kids >= 2 || nd.attached >= 1));  // compacted
      for (uint32_t c = nd.child_begin; c + 1 < nd.child_end; ++c)
        CHECK(t->nodes[c].key < t->nodes[c + 1].key);  // sibling keys ascend
    }
  }
}

TEST_CASE("searches on the running example") {
  TrieRig r(kExample);

  CHECK(r.verify(r.suf, "b") == LexRange{4, 6});
  CHECK(r.verify(r.rev, "a") == LexRange{2, 4});
  CHECK(r.verify(r.suf, "zz") == LexRange{});
  CHECK(r.verify(r.suf, "") == LexRange{1, 6});
  CHECK(r.verify(r.rev, "") == LexRange{1, 6});

  // Blind descent alone would land on the 'a' branch; verification rejects.
  CHECK(r.verify(r.suf, "ab") == LexRange{});
  CHECK(r.verify(r.suf, "aab") == LexRange{2, 3});
  CHECK(r.verify(r.rev, "aabaa") == LexRange{4, 4});
  CHECK(r.verify(r.rev, "$") == LexRange{1, 1});

  CHECK(r.fp_search(r.suf, "b") == LexRange{4, 6});
  CHECK(r.fp_search(r.rev, "a") == LexRange{2, 4});
  CHECK(r.fp_search(r.suf, "zz") == LexRange{});
  CHECK(r.fp_search(r.suf, "ab") == LexRange{});
  CHECK(r.fp_search(r.suf, "") == LexRange{1, 6});

  // A piece longer than every leaf string finds nothing.
  CHECK(r.verify(r.rev, "aabaaaabaa") == LexRange{});
  CHECK(r.fp_search(r.rev, "aabaaaabaa") == LexRange{});
}

TEST_CASE("descent paths, loci, and verified prefixes") {
  TrieRig r(kExample);
  const Bytes piece = "ab";
  const DescentPath p =
      blind_descend(r.suf, piece.size(), [&](uint64_t i) { return piece[i]; });
  CHECK(p.reached == 2);  // blind descent happily follows the 'a' edge
  REQUIRE(p.nodes.size() == 2);
  CHECK(p.nodes[0] == 0);
  CHECK(r.suf.nodes[p.nodes[1]].path_len == 4);

  const uint64_t ok = verified_len(r.suf, piece, p, [&](uint32_t k, uint64_t len) {
    return r.suf_strs[k - 1].substr(0, size_t(len));
  });
  CHECK(ok == 1);  // "a" matches, "ab" does not

  const auto at0 = locus_node(r.suf, p, 0);
  REQUIRE(at0.has_value());
  CHECK(*at0 == 0);
  const auto at1 = locus_node(r.suf, p, 1);
  REQUIRE(at1.has_value());
  CHECK(r.suf.nodes[*at1].rank_lo == 2);
  CHECK(r.suf.nodes[*at1].rank_hi == 3);
  CHECK(!locus_node(r.suf, p, 3).has_value());

  // A character with no edge stops the descent short.
  const Bytes zz = "zz";
  const DescentPath q =
      blind_descend(r.suf, zz.size(), [&](uint64_t i) { return zz[i]; });
  CHECK(q.reached == 0);
  CHECK(q.nodes.size() == 1);
}

TEST_CASE("duplicate strings tie-break by phrase index") {
  // "aaaa" parses as a | aa | a, so the reversed-phrase strings are
  // a, aa, a with phrases 1 and 3 identical.
  const Bytes text = "aaaa";
  const auto parse = lz77::parse(text);
  REQUIRE(parse.z() == 3);
  const auto rev =
      build_patricia(TrieKind::reversed_phrases, text, parse, '$');
  CHECK(rev.leaf_order == std::vector<uint32_t>{1, 3, 2});
  CHECK(rev.nodes.size() == 3);
  const uint32_t a = rev.child_by_key(0, order_key('a', '$'));
  REQUIRE(a != 0);
  CHECK(rev.nodes[a].attached == 2);
  CHECK(rev.nodes[a].rank_lo == 1);
  CHECK(rev.nodes[a].rank_hi == 3);

  const auto suf =
      build_patricia(TrieKind::boundary_suffixes, text, parse, '$');
  CHECK(suf.leaf_order == std::vector<uint32_t>{3, 2, 1});  // eps, a, aaa

  std::vector<Bytes> strs = leaf_strings(TrieKind::reversed_phrases, text, parse);
  const LexRange one = search_verify(rev, "a", [&](uint32_t k, uint64_t len) {
    return strs[k - 1].substr(0, size_t(len));
  });
  CHECK(one == LexRange{1, 3});
  const LexRange two = search_verify(rev, "aa", [&](uint32_t k, uint64_t len) {
    return strs[k - 1].substr(0, size_t(len));
  });
  CHECK(two == LexRange{3, 3});
}

TEST_CASE("single-phrase text gives one leaf") {
  const Bytes text = "a";
  const auto parse = lz77::parse(text);
  REQUIRE(parse.z() == 1);
  const auto rev = build_patricia(TrieKind::reversed_phrases, text, parse, '$');
  const auto suf = build_patricia(TrieKind::boundary_suffixes, text, parse, '$');
  CHECK(rev.leaf_order == std::vector<uint32_t>{1});
  CHECK(suf.leaf_order == std::vector<uint32_t>{1});
  CHECK(suf.root().attached == 1);  // the only suffix is empty
  CHECK(rev.nodes.size() == 2);
  CHECK(suf.nodes.size() == 1);
}

TEST_CASE("build rejects a parse that does not describe the text") {
  const Bytes text = "abab";
  auto parse = lz77::parse(text);
  parse.n = 5;
  CHECK_THROWS_WITH_AS(
      build_patricia(TrieKind::reversed_phrases, text, parse, '$'),
      "invalid-input: parse does not describe the text", error);
}

TEST_CASE("path fingerprints label every node") {
  TrieRig r(kExample);
  for (const PatriciaTree* t : {&r.rev, &r.suf}) {
    CHECK(t->has_fps);
    CHECK(t->root().path_fp == fp_empty());
    for (size_t i = 1; i < t->nodes.size(); ++i) {
      const TrieNode& nd = t->nodes[i];
      // The path label is the first path_len characters of any leaf below.
      const Bytes label =
          r.strs(*t)[t->leaf_order[nd.rank_lo - 1] - 1].substr(
              0, size_t(nd.path_len));
      CHECK(nd.path_fp == fp_of(r.params, label));
    }
  }
}

TEST_CASE("searches match a naive sorted-list oracle") {
  std::mt19937_64 rng(0x9a731c1a);
  for (int rep = 0; rep < 30; ++rep) {
    const uint64_t alpha = 2 + rep % 3;
    const uint64_t len = 1 + testutil::bounded(rng, 180);
    Bytes text = testutil::random_text(rng, len, alpha);
    if (rep % 2 == 0) text.push_back('$');  // half the rigs sentinel-extended
    TrieRig r(std::move(text));

    for (const PatriciaTree* t : {&r.rev, &r.suf}) {
      const auto& strs = r.strs(*t);
      const auto ord = naive_order(strs, '$');
      REQUIRE(t->leaf_order == ord);

      std::vector<Bytes> pieces;
      for (int i = 0; i < 25; ++i) {
        Bytes p = testutil::substring_pattern(rng, r.text, 8);
        if (i % 5 == 4 && !p.empty()) p[0] = char('a' + (p[0] - 'a' + 1) % 26);
        pieces.push_back(std::move(p));
      }
      pieces.push_back("");
      pieces.push_back("zzz");
      for (const Bytes& piece : pieces) {
        const LexRange want = naive_range(strs, ord, piece);
        CAPTURE(piece);
        CHECK(r.verify(*t, piece) == want);
        CHECK(r.fp_search(*t, piece) == want);
      }
    }
  }
}

TEST_CASE("leaf orders match the oracle on every short binary text") {
  for (uint64_t len = 1; len <= 9; ++len) {
    for (uint64_t bits = 0; bits < (uint64_t(1) << len); ++bits) {
      const Bytes text = testutil::binary_text(len, bits);
      const auto parse = lz77::parse(text);
      for (const TrieKind kind :
           {TrieKind::reversed_phrases, TrieKind::boundary_suffixes}) {
        const auto tree = build_patricia(kind, text, parse, '$');
        const auto strs = leaf_strings(kind, text, parse);
        CAPTURE(text);
        REQUIRE(tree.leaf_order == naive_order(strs, '$'));
        const auto ord = tree.leaf_order;
        for (const Bytes& piece : {Bytes("a"), Bytes("b"), Bytes("ab"),
                                   Bytes("ba"), Bytes("aab"), Bytes("")}) {
          const LexRange want = naive_range(strs, ord, piece);
          const LexRange got =
              search_verify(tree, piece, [&](uint32_t k, uint64_t l) {
                return strs[k - 1].substr(0, size_t(l));
              });
          CHECK(got == want);
        }
      }
    }
  }
}
