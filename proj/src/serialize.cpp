#include "gsi/serialize.hpp"

#include <algorithm>
#include <array>
#include <cstring>

namespace gsi {

namespace {

constexpr const char* kSectionNames[] = {
    "PARAMS",       "PARSE",    "SLP_S",    "SLP_SPRIME",
    "SPRIME_MAPS",  "BOOKMARKS", "FP_BOOKMARKS", "TRIE_REV",
    "TRIE_SUF",     "GRID",     "SOURCES",  "SYMBOL_FPS",
};
constexpr size_t kSectionCount = 12;

std::array<uint32_t, 256> make_crc_table() {
  std::array<uint32_t, 256> t{};
  for (uint32_t i = 0; i < 256; ++i) {
    uint32_t c = i;
    for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
    t[i] = c;
  }
  return t;
}

uint32_t crc32_of(ByteView bytes) {
  static const std::array<uint32_t, 256> table = make_crc_table();
  uint32_t c = 0xFFFFFFFFu;
  for (unsigned char b : bytes) c = table[(c ^ b) & 0xFFu] ^ (c >> 8);
  return c ^ 0xFFFFFFFFu;
}

struct Writer {
  Bytes out;

  void u8(uint8_t v) { out.push_back(char(v)); }
  void u16(uint16_t v) {
    for (int i = 0; i < 2; ++i) out.push_back(char((v >> (8 * i)) & 0xFF));
  }
  void u32(uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(char((v >> (8 * i)) & 0xFF));
  }
  void u64(uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(char((v >> (8 * i)) & 0xFF));
  }
  void bytes(ByteView b) { out.append(b); }
  void fp(const Fp& f) {
    u64(f.hash);
    u64(f.pow);
    u64(f.len);
  }
};

// Bounded little-endian reader carrying absolute file offsets for errors.
struct Reader {
  ByteView in;
  uint64_t base = 0;  // file offset of in[0]
  uint64_t pos = 0;   // next unread byte, relative to in

  uint64_t offset() const { return base + pos; }
  uint64_t left() const { return in.size() - pos; }

  void need(uint64_t n, const char* what) {
    if (left() < n)
      fail(errc::format_error,
           std::string("file ends inside ") + what, offset());
  }
  uint8_t u8(const char* what) {
    need(1, what);
    return uint8_t(in[size_t(pos++)]);
  }
  uint16_t u16(const char* what) {
    need(2, what);
    uint16_t v = 0;
    for (int i = 0; i < 2; ++i) v |= uint16_t(uint8_t(in[size_t(pos + i)])) << (8 * i);
    pos += 2;
    return v;
  }
  uint32_t u32(const char* what) {
    need(4, what);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= uint32_t(uint8_t(in[size_t(pos + i)])) << (8 * i);
    pos += 4;
    return v;
  }
  uint64_t u64(const char* what) {
    need(8, what);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= uint64_t(uint8_t(in[size_t(pos + i)])) << (8 * i);
    pos += 8;
    return v;
  }
  ByteView bytes(uint64_t n, const char* what) {
    need(n, what);
    ByteView v = in.substr(size_t(pos), size_t(n));
    pos += n;
    return v;
  }
  Fp fp(const char* what) {
    Fp f;
    f.hash = u64(what);
    f.pow = u64(what);
    f.len = u64(what);
    return f;
  }
  // A counted list must fit in the remaining payload; guards against
  // corrupt counts requesting absurd allocations.
  uint64_t list_count(uint64_t elem_bytes, const char* what) {
    const uint64_t n = u64(what);
    if (elem_bytes != 0 && n > left() / elem_bytes)
      fail(errc::format_error,
           std::string("impossible element count in ") + what, offset() - 8);
    return n;
  }
  void done(const char* what) {
    if (pos != in.size())
      fail(errc::format_error,
           std::string("trailing bytes after ") + what, offset());
  }
};

// ---- section writers ----

void write_params(Writer& w, const SelfIndex& idx) {
  w.u64(idx.params.sigma);
  w.u32(idx.c);
  w.u64(idx.params.q);
  w.u64(idx.seed);
  w.u8(uint8_t(idx.mode));
  w.u8(idx.sentinel);
  w.u64(idx.n());
  w.u64(idx.z());
  for (int16_t v : idx.params.char_map) w.u16(uint16_t(v));
}

void write_parse(Writer& w, const lz77::Parse& parse) {
  for (const lz77::Phrase& p : parse.phrases) {
    w.u64(p.start);
    w.u64(p.copy_len);
    w.u64(p.source_start);
    w.u16(p.trailing ? uint16_t(*p.trailing) : uint16_t(0xFFFF));
  }
}

void write_slp(Writer& w, const Slp& slp) {
  w.u64(slp.size());
  w.u32(slp.size() == 0 ? 0 : slp.root());
  for (const Rule& r : slp.rules()) {
    if (r.terminal) {
      w.u8(0);
      w.u8(r.ch);
    } else {
      w.u8(1);
      w.u32(r.left);
      w.u32(r.right);
    }
  }
}

void write_sprime(Writer& w, const SPrime& sp) {
  w.u64(sp.radius);
  w.u64(sp.text.size());
  w.bytes(sp.text);
  w.u64(sp.intervals.size());
  for (const SPrimeInterval& iv : sp.intervals) {
    w.u64(iv.s_begin);
    w.u64(iv.s_end);
    w.u64(iv.sp_begin);
  }
  w.u64(sp.boundary_pos.size());
  for (uint64_t b : sp.boundary_pos) w.u64(b);
}

void write_bookmarks(Writer& w, const BookmarkSet& bm) {
  w.u64(bm.levels.size());
  for (uint64_t l : bm.levels) w.u64(l);
  w.u64(bm.anchors.size());
  for (const AnchorPair& a : bm.anchors) {
    w.u32(a.right.v);
    w.u32(a.right.w);
    w.u64(a.right.off);
    w.u32(a.left.v);
    w.u32(a.left.w);
    w.u64(a.left.off);
  }
}

void write_trie(Writer& w, const PatriciaTree& t) {
  w.u8(uint8_t(t.kind));
  w.u8(t.sentinel);
  w.u8(t.has_fps ? 1 : 0);
  w.u64(t.leaf_order.size());
  for (uint32_t k : t.leaf_order) w.u32(k);
  w.u64(t.nodes.size());
  // Preorder walk; children are contiguous and already key-ascending.
  std::vector<uint32_t> stack = {0};
  while (!stack.empty()) {
    const uint32_t id = stack.back();
    stack.pop_back();
    const TrieNode& nd = t.nodes[id];
    w.u32(nd.key);
    w.u64(nd.path_len);
    w.u32(nd.rank_lo);
    w.u32(nd.rank_hi);
    w.u32(nd.attached);
    w.fp(nd.path_fp);
    w.u32(nd.child_end - nd.child_begin);
    for (uint32_t c = nd.child_end; c > nd.child_begin; --c)
      stack.push_back(c - 1);
  }
}

void write_grid(Writer& w, const Grid& g) {
  w.u64(g.ys.size());
  for (uint32_t y : g.ys) w.u32(y);
  for (uint32_t p : g.phrase_by_y) w.u32(p);
  w.u64(g.nodes.size());
  for (const WaveletNode& nd : g.nodes) {
    w.u32(nd.lo);
    w.u32(nd.hi);
    w.u32(nd.left);
    w.u32(nd.right);
    const uint64_t nbits = nd.ones.empty() ? 0 : nd.ones.size() - 1;
    w.u64(nbits);
    uint64_t word = 0;
    for (uint64_t i = 0; i < nbits; ++i) {
      if (nd.ones[size_t(i) + 1] != nd.ones[size_t(i)]) word |= uint64_t(1) << (i % 64);
      if (i % 64 == 63 || i + 1 == nbits) {
        w.u64(word);
        word = 0;
      }
    }
  }
}

void write_sources(Writer& w, const SourceSet& s) {
  w.u64(s.entries.size());
  for (const SourceEntry& e : s.entries) {
    w.u64(e.src_start);
    w.u64(e.src_end);
    w.u64(e.phrase_start);
    w.u32(e.phrase);
  }
}

void write_symbol_fps(Writer& w, const SelfIndex& idx) {
  w.u64(idx.sym_fwd.size());
  for (const Fp& f : idx.sym_fwd) w.fp(f);
  w.u64(idx.sym_bwd.size());
  for (const Fp& f : idx.sym_bwd) w.fp(f);
}

// ---- section readers ----

struct ParamsFields {
  uint64_t n = 0;
  uint64_t z = 0;
};

ParamsFields read_params(Reader& r, SelfIndex& idx) {
  idx.params.sigma = r.u64("PARAMS sigma");
  idx.c = r.u32("PARAMS c");
  idx.params.c = idx.c;
  idx.params.q = r.u64("PARAMS q");
  idx.seed = r.u64("PARAMS seed");
  idx.params.seed = idx.seed;
  const uint8_t mode = r.u8("PARAMS mode");
  if (mode > 1)
    fail(errc::format_error, "unknown index mode", r.offset() - 1);
  idx.mode = IndexMode(mode);
  idx.sentinel = r.u8("PARAMS sentinel");
  idx.params.sentinel = idx.sentinel;
  ParamsFields f;
  const uint64_t n_off = r.offset();
  f.n = r.u64("PARAMS n");
  if (f.n == 0)
    fail(errc::format_error, "index over an empty text", n_off);
  const uint64_t z_off = r.offset();
  f.z = r.u64("PARAMS z");
  if (f.z == 0)
    fail(errc::format_error, "index holds no phrases", z_off);
  for (int16_t& v : idx.params.char_map)
    v = int16_t(r.u16("PARAMS char_map"));
  r.done("PARAMS");
  return f;
}

void read_parse(Reader& r, const ParamsFields& pf, lz77::Parse& parse) {
  parse.phrases.clear();
  parse.ends.clear();
  uint64_t end = 0;
  for (uint64_t k = 0; k < pf.z; ++k) {
    lz77::Phrase p;
    p.start = r.u64("PARSE start");
    p.copy_len = r.u64("PARSE copy_len");
    p.source_start = r.u64("PARSE source_start");
    const uint16_t tr = r.u16("PARSE trailing");
    if (tr != 0xFFFF) {
      if (tr > 0xFF)
        fail(errc::format_error, "trailing byte out of range", r.offset() - 2);
      p.trailing = static_cast<unsigned char>(tr);
    }
    if (p.start != end + 1)
      fail(errc::format_error, "phrases do not tile the text", r.offset());
    if (p.length() == 0)
      fail(errc::format_error, "empty phrase", r.offset());
    if (p.copy_len == 0 ? p.source_start != 0
                        : (p.source_start == 0 ||
                           p.source_start + p.copy_len > p.start))
      fail(errc::format_error, "phrase source is not entirely earlier",
           r.offset());
    end = p.start + p.length() - 1;
    parse.phrases.push_back(p);
    parse.ends.push_back(end);
  }
  parse.n = end;
  if (end != pf.n + 1)
    fail(errc::format_error, "parse length disagrees with PARAMS",
         r.offset());
  r.done("PARSE");
}

Slp read_slp(Reader& r, const char* what) {
  const uint64_t count = r.list_count(2, what);
  const Symbol root = r.u32(what);
  std::vector<Rule> rules;
  rules.reserve(size_t(count));
  for (uint64_t i = 0; i < count; ++i) {
    const uint8_t tag = r.u8(what);
    Rule rule;
    if (tag == 0) {
      rule.terminal = true;
      rule.ch = r.u8(what);
    } else if (tag == 1) {
      rule.left = r.u32(what);
      rule.right = r.u32(what);
    } else {
      fail(errc::format_error, std::string("unknown rule tag in ") + what,
           r.offset() - 1);
    }
    rules.push_back(rule);
  }
  r.done(what);
  if (count == 0) return Slp();
  try {
    return Slp::from_rules(std::move(rules), root);
  } catch (const error& e) {
    fail(errc::format_error,
         std::string(what) + " does not hold a valid grammar: " + e.what(),
         r.offset());
  }
}

void read_sprime(Reader& r, SPrime& sp) {
  sp.radius = r.u64("SPRIME_MAPS radius");
  const uint64_t len = r.list_count(1, "SPRIME_MAPS text");
  sp.text = Bytes(r.bytes(len, "SPRIME_MAPS text"));
  const uint64_t ivs = r.list_count(24, "SPRIME_MAPS intervals");
  sp.intervals.clear();
  for (uint64_t i = 0; i < ivs; ++i) {
    SPrimeInterval iv;
    iv.s_begin = r.u64("SPRIME_MAPS interval");
    iv.s_end = r.u64("SPRIME_MAPS interval");
    iv.sp_begin = r.u64("SPRIME_MAPS interval");
    sp.intervals.push_back(iv);
  }
  const uint64_t bs = r.list_count(8, "SPRIME_MAPS boundaries");
  sp.boundary_pos.clear();
  for (uint64_t i = 0; i < bs; ++i)
    sp.boundary_pos.push_back(r.u64("SPRIME_MAPS boundary"));
  r.done("SPRIME_MAPS");
}

void read_bookmarks(Reader& r, const char* what, BookmarkSet& bm) {
  const uint64_t nl = r.list_count(8, what);
  bm.levels.clear();
  for (uint64_t i = 0; i < nl; ++i) bm.levels.push_back(r.u64(what));
  const uint64_t na = r.list_count(32, what);
  bm.anchors.clear();
  for (uint64_t i = 0; i < na; ++i) {
    AnchorPair a;
    a.right.v = r.u32(what);
    a.right.w = r.u32(what);
    a.right.off = r.u64(what);
    a.left.v = r.u32(what);
    a.left.w = r.u32(what);
    a.left.off = r.u64(what);
    bm.anchors.push_back(a);
  }
  r.done(what);
}

void read_trie(Reader& r, const char* what, PatriciaTree& t) {
  const uint8_t kind = r.u8(what);
  if (kind > 1)
    fail(errc::format_error, std::string("unknown trie kind in ") + what,
         r.offset() - 1);
  t.kind = TrieKind(kind);
  t.sentinel = r.u8(what);
  t.has_fps = r.u8(what) != 0;
  const uint64_t z = r.list_count(4, what);
  t.leaf_order.clear();
  for (uint64_t i = 0; i < z; ++i) t.leaf_order.push_back(r.u32(what));
  t.leaf_rank.assign(size_t(z), 0);
  for (uint64_t rank = 1; rank <= z; ++rank) {
    const uint32_t phrase = t.leaf_order[size_t(rank - 1)];
    if (phrase < 1 || phrase > z || t.leaf_rank[size_t(phrase - 1)] != 0)
      fail(errc::format_error,
           std::string("leaf order is not a permutation in ") + what,
           r.offset());
    t.leaf_rank[size_t(phrase - 1)] = uint32_t(rank);
  }

  const uint64_t count = r.list_count(1, what);
  if (count == 0)
    fail(errc::format_error, std::string("empty trie in ") + what,
         r.offset() - 8);
  struct Pending {
    uint32_t tmp = 0;       // record index in preorder
    uint32_t kids_left = 0;
  };
  struct TmpNode {
    TrieNode fields;
    std::vector<uint32_t> kids;  // record indices, in order
  };
  std::vector<TmpNode> tmp;
  tmp.reserve(size_t(count));
  std::vector<Pending> stack;
  for (uint64_t i = 0; i < count; ++i) {
    TmpNode nd;
    nd.fields.key = r.u32(what);
    nd.fields.path_len = r.u64(what);
    nd.fields.rank_lo = r.u32(what);
    nd.fields.rank_hi = r.u32(what);
    nd.fields.attached = r.u32(what);
    nd.fields.path_fp = r.fp(what);
    if (nd.fields.rank_lo < 1 || nd.fields.rank_hi > z ||
        nd.fields.rank_lo > nd.fields.rank_hi ||
        nd.fields.attached > nd.fields.rank_hi - nd.fields.rank_lo + 1)
      fail(errc::format_error,
           std::string("leaf ranks out of range in ") + what, r.offset());
    const uint32_t kid_count = r.u32(what);
    const uint32_t id = uint32_t(tmp.size());
    tmp.push_back(std::move(nd));
    if (!stack.empty()) {
      tmp[stack.back().tmp].kids.push_back(id);
      if (--stack.back().kids_left == 0) stack.pop_back();
    } else if (id != 0) {
      fail(errc::format_error,
           std::string("node outside the preorder tree in ") + what,
           r.offset());
    }
    if (kid_count > 0) stack.push_back({id, kid_count});
  }
  if (!stack.empty())
    fail(errc::format_error,
         std::string("preorder tree misses children in ") + what, r.offset());
  r.done(what);

  // Relabel breadth-first (the in-memory layout): children contiguous.
  std::vector<uint32_t> order = {0};
  std::vector<uint32_t> new_id(tmp.size(), 0);
  for (size_t head = 0; head < order.size(); ++head)
    for (uint32_t kid : tmp[order[head]].kids) {
      new_id[kid] = uint32_t(order.size());
      order.push_back(kid);
    }
  t.nodes.assign(tmp.size(), TrieNode{});
  for (size_t bfs = 0; bfs < order.size(); ++bfs) {
    const TmpNode& src = tmp[order[bfs]];
    TrieNode nd = src.fields;
    nd.parent = 0;
    nd.child_begin = src.kids.empty() ? 0 : new_id[src.kids.front()];
    nd.child_end = src.kids.empty() ? 0 : new_id[src.kids.back()] + 1;
    t.nodes[bfs] = nd;
  }
  for (size_t bfs = 0; bfs < order.size(); ++bfs)
    for (uint32_t kid : tmp[order[bfs]].kids)
      t.nodes[new_id[kid]].parent = uint32_t(bfs);
}

void read_grid(Reader& r, Grid& g) {
  const uint64_t z = r.list_count(8, "GRID");
  const auto perm = [&r, z](std::vector<uint32_t>& v, const char* what) {
    std::vector<uint8_t> seen(size_t(z) + 1, 0);
    for (uint64_t i = 0; i < z; ++i) {
      const uint32_t x = r.u32(what);
      if (x < 1 || x > z || seen[x]++)
        fail(errc::format_error,
             std::string(what) + " is not a permutation", r.offset() - 4);
      v.push_back(x);
    }
  };
  g.ys.clear();
  g.phrase_by_y.clear();
  perm(g.ys, "GRID ys");
  perm(g.phrase_by_y, "GRID payloads");
  const uint64_t count = r.list_count(24, "GRID nodes");
  g.nodes.clear();
  for (uint64_t i = 0; i < count; ++i) {
    WaveletNode nd;
    nd.lo = r.u32("GRID node");
    nd.hi = r.u32("GRID node");
    nd.left = r.u32("GRID node");
    nd.right = r.u32("GRID node");
    const uint64_t nbits = r.u64("GRID node bits");
    if (nbits > 0) {
      nd.ones.assign(size_t(nbits) + 1, 0);
      uint64_t word = 0;
      for (uint64_t b = 0; b < nbits; ++b) {
        if (b % 64 == 0) word = r.u64("GRID node bits");
        nd.ones[size_t(b) + 1] =
            nd.ones[size_t(b)] + uint32_t((word >> (b % 64)) & 1);
      }
    }
    g.nodes.push_back(std::move(nd));
  }
  r.done("GRID");

  // Walk from the root checking every node's value range, child links, and
  // bit counts against the wavelet shape the queries assume.
  if (count == 0)
    fail(errc::format_error, "grid has no wavelet nodes", r.base);
  struct Expect {
    uint32_t node, lo, hi;
  };
  std::vector<uint8_t> seen(size_t(count), 0);
  std::vector<Expect> walk = {{0, 1, uint32_t(z)}};
  uint64_t visited = 0;
  while (!walk.empty()) {
    const Expect e = walk.back();
    walk.pop_back();
    if (e.node >= count || seen[e.node]++)
      fail(errc::format_error, "grid nodes do not form a wavelet tree",
           r.base);
    ++visited;
    const WaveletNode& nd = g.nodes[e.node];
    if (nd.lo != e.lo || nd.hi != e.hi)
      fail(errc::format_error, "grid node covers the wrong value range",
           r.base);
    if (e.lo == e.hi) {
      if (nd.left != 0 || nd.right != 0 || !nd.ones.empty())
        fail(errc::format_error, "malformed grid leaf", r.base);
      continue;
    }
    const uint32_t mid = e.lo + (e.hi - e.lo) / 2;
    const uint64_t len = uint64_t(e.hi) - e.lo + 1;
    if (nd.left == 0 || nd.right == 0 || nd.ones.size() != size_t(len) + 1 ||
        nd.ones[size_t(len)] != e.hi - mid)
      fail(errc::format_error, "grid node bits disagree with its range",
           r.base);
    walk.push_back({nd.right, mid + 1, e.hi});
    walk.push_back({nd.left, e.lo, mid});
  }
  if (visited != count)
    fail(errc::format_error, "grid holds unreachable wavelet nodes", r.base);
}

void read_sources(Reader& r, SourceSet& s) {
  const uint64_t count = r.list_count(28, "SOURCES");
  s.entries.clear();
  for (uint64_t i = 0; i < count; ++i) {
    SourceEntry e;
    e.src_start = r.u64("SOURCES entry");
    e.src_end = r.u64("SOURCES entry");
    e.phrase_start = r.u64("SOURCES entry");
    e.phrase = r.u32("SOURCES entry");
    s.entries.push_back(e);
  }
  r.done("SOURCES");
  index_sources(s);
}

void read_symbol_fps(Reader& r, SelfIndex& idx) {
  const uint64_t nf = r.list_count(24, "SYMBOL_FPS");
  idx.sym_fwd.clear();
  for (uint64_t i = 0; i < nf; ++i)
    idx.sym_fwd.push_back(r.fp("SYMBOL_FPS forward"));
  const uint64_t nb = r.list_count(24, "SYMBOL_FPS");
  idx.sym_bwd.clear();
  for (uint64_t i = 0; i < nb; ++i)
    idx.sym_bwd.push_back(r.fp("SYMBOL_FPS backward"));
  r.done("SYMBOL_FPS");
}

// Validates magic, version, and checksum; returns the 12 section payload
// views with their absolute offsets.
std::array<std::pair<ByteView, uint64_t>, kSectionCount> frame_in(
    ByteView bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kIndexMagic, 4) != 0)
    fail(errc::format_error, "bad magic", 0);
  {
    Reader head{bytes, 0, 4};
    if (head.u32("format version") != kIndexFormatVersion)
      fail(errc::format_error, "unsupported format version", 4);
  }
  if (bytes.size() < 12)
    fail(errc::format_error, "file ends inside the checksum", bytes.size());
  const ByteView body = bytes.substr(0, bytes.size() - 4);
  Reader tail{bytes, 0, bytes.size() - 4};
  if (crc32_of(body) != tail.u32("checksum"))
    fail(errc::format_error, "checksum mismatch", bytes.size() - 4);

  // Section framing never reads into the trailing checksum.
  Reader r{body, 0, 8};
  std::array<std::pair<ByteView, uint64_t>, kSectionCount> sections;
  for (size_t i = 0; i < kSectionCount; ++i) {
    const uint64_t len_off = r.offset();
    const uint64_t len = r.u64(kSectionNames[i]);
    if (len > r.left())
      fail(errc::format_error,
           std::string("section length overruns the file: ") +
               kSectionNames[i],
           len_off);
    sections[i] = {r.bytes(len, kSectionNames[i]), len_off + 8};
  }
  r.done("the last section");
  return sections;
}

}  // namespace

Bytes save_index(const SelfIndex& idx) {
  Writer file;
  file.bytes(ByteView(kIndexMagic, 4));
  file.u32(kIndexFormatVersion);

  Writer sec;
  const auto emit = [&file, &sec]() {
    file.u64(sec.out.size());
    file.bytes(sec.out);
    sec.out.clear();
  };
  write_params(sec, idx);
  emit();
  write_parse(sec, idx.parse);
  emit();
  write_slp(sec, idx.slp_s);
  emit();
  write_slp(sec, idx.slp_sp);
  emit();
  write_sprime(sec, idx.sprime);
  emit();
  write_bookmarks(sec, idx.marks);
  emit();
  write_bookmarks(sec, idx.fp_marks);
  emit();
  write_trie(sec, idx.trie_rev);
  emit();
  write_trie(sec, idx.trie_suf);
  emit();
  write_grid(sec, idx.grid);
  emit();
  write_sources(sec, idx.sources);
  emit();
  write_symbol_fps(sec, idx);
  emit();

  file.u32(crc32_of(file.out));
  return std::move(file.out);
}

SelfIndex load_index(ByteView bytes) {
  const auto sections = frame_in(bytes);
  const auto reader = [&](size_t i) {
    return Reader{sections[i].first, sections[i].second, 0};
  };

  SelfIndex idx;
  Reader r0 = reader(0);
  const ParamsFields pf = read_params(r0, idx);
  Reader r1 = reader(1);
  read_parse(r1, pf, idx.parse);
  Reader r2 = reader(2);
  idx.slp_s = read_slp(r2, "SLP_S");
  Reader r3 = reader(3);
  idx.slp_sp = read_slp(r3, "SLP_SPRIME");
  Reader r4 = reader(4);
  read_sprime(r4, idx.sprime);
  Reader r5 = reader(5);
  read_bookmarks(r5, "BOOKMARKS", idx.marks);
  Reader r6 = reader(6);
  read_bookmarks(r6, "FP_BOOKMARKS", idx.fp_marks);
  Reader r7 = reader(7);
  read_trie(r7, "TRIE_REV", idx.trie_rev);
  Reader r8 = reader(8);
  read_trie(r8, "TRIE_SUF", idx.trie_suf);
  Reader r9 = reader(9);
  read_grid(r9, idx.grid);
  Reader r10 = reader(10);
  read_sources(r10, idx.sources);
  Reader r11 = reader(11);
  read_symbol_fps(r11, idx);

  // Cross-checks: the components must agree on the phrase count and text.
  const uint64_t z = pf.z;
  if (idx.trie_rev.z() != z || idx.trie_suf.z() != z || idx.grid.z() != z ||
      idx.sprime.boundary_pos.size() != z)
    fail(errc::format_error, "sections disagree on the phrase count",
         sections[1].second);
  if (idx.slp_s.size() != 0 && idx.slp_s.text_len() != pf.n + 1)
    fail(errc::format_error, "text grammar length disagrees with PARAMS",
         sections[2].second);
  if (idx.slp_sp.size() != 0 &&
      idx.slp_sp.text_len() != idx.sprime.text.size())
    fail(errc::format_error,
         "reduced grammar length disagrees with SPRIME_MAPS",
         sections[3].second);
  if (idx.slp_s.size() == 0 || idx.slp_sp.size() == 0)
    fail(errc::format_error, "index is missing a grammar",
         sections[2].second);

  // Anchors must reference reduced-grammar symbols and tile the
  // (position, level) table the accessors index into.
  const uint64_t rules = idx.slp_sp.size();
  const auto check_marks = [&](const BookmarkSet& bm, size_t sec) {
    if (bm.anchors.size() != z * bm.levels.size())
      fail(errc::format_error, "anchor table size disagrees with the levels",
           sections[sec].second);
    if (!std::is_sorted(bm.levels.begin(), bm.levels.end()))
      fail(errc::format_error, "anchor levels are not ascending",
           sections[sec].second);
    for (const AnchorPair& a : bm.anchors)
      for (const Anchor* an : {&a.right, &a.left})
        if ((an->v != kNoSymbol && an->v >= rules) ||
            (an->w != kNoSymbol && an->w >= rules))
          fail(errc::format_error, "anchor references an undefined symbol",
               sections[sec].second);
  };
  check_marks(idx.marks, 5);
  check_marks(idx.fp_marks, 6);
  if (idx.mode == IndexMode::verify) {
    if (!idx.fp_marks.levels.empty() || !idx.sym_fwd.empty() ||
        !idx.sym_bwd.empty())
      fail(errc::format_error,
           "verification-mode index carries fingerprint tables",
           sections[6].second);
  } else if (idx.sym_fwd.size() != rules || idx.sym_bwd.size() != rules) {
    fail(errc::format_error,
         "per-symbol fingerprint tables disagree with the grammar",
         sections[11].second);
  }
  return idx;
}

std::vector<std::pair<std::string, uint64_t>> section_sizes(ByteView bytes) {
  const auto sections = frame_in(bytes);
  std::vector<std::pair<std::string, uint64_t>> out;
  out.reserve(kSectionCount);
  for (size_t i = 0; i < kSectionCount; ++i)
    out.push_back({kSectionNames[i], sections[i].first.size()});
  return out;
}

}  // namespace gsi
