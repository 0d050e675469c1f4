#include "gsi/boundary_access.hpp"

#include <algorithm>

namespace gsi {

std::optional<uint64_t> SPrime::to_reduced(uint64_t s) const {
  // Last interval starting at or before s.
  auto it = std::upper_bound(
      intervals.begin(), intervals.end(), s,
      [](uint64_t v, const SPrimeInterval& iv) { return v < iv.s_begin; });
  if (it == intervals.begin()) return std::nullopt;
  --it;
  if (s > it->s_end) return std::nullopt;
  return it->sp_begin + (s - it->s_begin);
}

uint64_t SPrime::to_original(uint64_t sp) const {
  auto it = std::upper_bound(
      intervals.begin(), intervals.end(), sp,
      [](uint64_t v, const SPrimeInterval& iv) { return v < iv.sp_begin; });
  if (it == intervals.begin())
    fail(errc::range_error, "reduced position out of range");
  --it;
  const uint64_t len = it->s_end - it->s_begin + 1;
  if (sp >= it->sp_begin + len)
    fail(errc::range_error, "reduced position out of range");
  return it->s_begin + (sp - it->sp_begin);
}

uint64_t default_radius(uint64_t n) {
  return std::max<uint64_t>(ceil_log2(n), 4);
}

SPrime build_sprime(ByteView text, const lz77::Parse& parse, uint64_t radius) {
  if (radius < 1) fail(errc::parameter_error, "radius must be positive");
  if (parse.ends.empty()) fail(errc::corrupt_parse, "parse has no phrases");
  const uint64_t n = parse.n;
  if (text.size() != n)
    fail(errc::corrupt_parse, "text length disagrees with the parse");

  SPrime sp;
  sp.radius = radius;
  uint64_t cur_lo = 0, cur_hi = 0;
  auto flush = [&]() {
    if (cur_lo == 0) return;
    SPrimeInterval iv;
    iv.s_begin = cur_lo;
    iv.s_end = cur_hi;
    iv.sp_begin = sp.text.size() + 1;
    sp.text.append(text.substr(size_t(cur_lo - 1), size_t(cur_hi - cur_lo + 1)));
    sp.intervals.push_back(iv);
  };
  for (uint64_t e : parse.ends) {
    const uint64_t lo = e > radius ? e - radius : 1;
    const uint64_t hi = std::min(n, e + radius);
    if (cur_lo != 0 && lo <= cur_hi + 1) {
      cur_hi = std::max(cur_hi, hi);
    } else {
      flush();
      cur_lo = lo;
      cur_hi = hi;
    }
  }
  flush();

  sp.boundary_pos.reserve(parse.ends.size());
  for (uint64_t e : parse.ends) {
    const auto r = sp.to_reduced(e);
    if (!r) fail(errc::corrupt_parse, "phrase end fell outside its own window");
    sp.boundary_pos.push_back(*r);
  }
  return sp;
}

namespace {

// Smallest r with r^m >= v (i.e. ceil of the m-th root).
uint64_t ceil_root(uint64_t v, uint32_t m) {
  if (v <= 1 || m == 0) return v;
  auto pow_ge = [&](uint64_t r) {
    // Does r^m reach v? Saturating.
    uint64_t acc = 1;
    for (uint32_t t = 0; t < m; ++t) {
      if (acc >= (v + r - 1) / r) return true;  // acc * r >= v
      acc *= r;
    }
    return acc >= v;
  };
  uint64_t lo = 1, hi = v;
  while (lo < hi) {
    const uint64_t mid = lo + (hi - lo) / 2;
    if (pow_ge(mid))
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

std::vector<uint64_t> finish_levels(std::vector<uint64_t> desc) {
  desc.push_back(2);
  std::sort(desc.begin(), desc.end());
  desc.erase(std::unique(desc.begin(), desc.end()), desc.end());
  return desc;
}

}  // namespace

std::vector<uint64_t> extraction_levels(uint64_t n_prime) {
  std::vector<uint64_t> out;
  uint64_t cur = std::max<uint64_t>(ceil_log2(std::max<uint64_t>(n_prime, 2)), 2);
  while (cur > 2) {
    out.push_back(cur);
    cur = ceil_log2(cur);
  }
  return finish_levels(std::move(out));
}

std::vector<uint64_t> fingerprint_levels(uint64_t n_prime) {
  std::vector<uint64_t> out;
  uint32_t denom = 2;
  while (true) {
    const uint64_t level = ceil_root(std::max<uint64_t>(n_prime, 2), denom);
    if (level <= 2) break;
    out.push_back(level);
    if (denom > 64) break;  // unreachable; defensive
    denom *= 2;
  }
  return finish_levels(std::move(out));
}

namespace {

struct Located {
  Symbol sym = kNoSymbol;
  uint64_t start = 0;  // 1-based start of sym's expansion slice
};

// Deepest node containing all leaves [lo, hi] (the LCA of the two leaves).
Located locate_lca(const Slp& slp, uint64_t lo, uint64_t hi) {
  Symbol cur = slp.root();
  uint64_t start = 1;
  while (!slp.is_terminal(cur)) {
    const uint64_t split = start + slp.exp_len(slp.left(cur)) - 1;
    if (hi <= split) {
      cur = slp.left(cur);
    } else if (lo > split) {
      start = split + 1;
      cur = slp.right(cur);
    } else {
      break;
    }
  }
  return {cur, start};
}

// Deepest descendant of (sym, start) on its right spine containing leaf pos.
Located right_spine(const Slp& slp, Symbol sym, uint64_t start, uint64_t pos) {
  while (!slp.is_terminal(sym)) {
    const uint64_t rstart = start + slp.exp_len(slp.left(sym));
    if (pos >= rstart) {
      sym = slp.right(sym);
      start = rstart;
    } else {
      break;
    }
  }
  return {sym, start};
}

// Deepest descendant of (sym, start) on its left spine containing leaf pos.
Symbol left_spine(const Slp& slp, Symbol sym, uint64_t start, uint64_t pos) {
  while (!slp.is_terminal(sym)) {
    const uint64_t lend = start + slp.exp_len(slp.left(sym)) - 1;
    if (pos <= lend)
      sym = slp.left(sym);
    else
      break;
  }
  return sym;
}

Anchor make_right_anchor(const Slp& slp, uint64_t p, uint64_t level) {
  const uint64_t n = slp.text_len();
  Anchor a;
  if (p + 1 > n) return a;  // nothing to the right of the last leaf
  const uint64_t lo = p + 1;
  const uint64_t hi = std::min(p + level, n);
  if (lo == hi) {
    a.v = locate_lca(slp, lo, lo).sym;
    a.off = 1;
    return a;
  }
  const Located u = locate_lca(slp, lo, hi);
  const uint64_t split = u.start + slp.exp_len(slp.left(u.sym)) - 1;
  const Located v = right_spine(slp, slp.left(u.sym), u.start, lo);
  a.v = v.sym;
  a.off = lo - v.start + 1;
  a.w = left_spine(slp, slp.right(u.sym), split + 1, hi);
  return a;
}

Anchor make_left_anchor(const Slp& slp, uint64_t p, uint64_t level) {
  Anchor a;
  const uint64_t lo = p >= level ? p - level + 1 : 1;
  if (lo == p) {
    a.w = locate_lca(slp, p, p).sym;
    a.off = 1;
    return a;
  }
  const Located u = locate_lca(slp, lo, p);
  const uint64_t split = u.start + slp.exp_len(slp.left(u.sym)) - 1;
  a.v = right_spine(slp, slp.left(u.sym), u.start, lo).sym;
  a.w = left_spine(slp, slp.right(u.sym), split + 1, p);
  a.off = p - split;
  return a;
}

}  // namespace

BookmarkSet build_bookmarks(const Slp& slp, std::span<const uint64_t> positions,
                            std::span<const uint64_t> levels,
                            uint32_t balance_c) {
  const uint64_t n = slp.text_len();
  const uint32_t bound =
      balance_c * std::max<uint32_t>(ceil_log2(std::max<uint64_t>(n, 2)), 1);
  if (slp.height() > bound)
    fail(errc::balance_error,
         "grammar height " + std::to_string(slp.height()) +
             " exceeds the balance bound " + std::to_string(bound));

  BookmarkSet bm;
  bm.levels.assign(levels.begin(), levels.end());
  bm.anchors.reserve(positions.size() * levels.size());
  for (uint64_t p : positions) {
    if (p < 1 || p > n)
      fail(errc::range_error, "bookmark position out of range");
    for (uint64_t level : levels) {
      AnchorPair pair;
      pair.right = make_right_anchor(slp, p, level);
      pair.left = make_left_anchor(slp, p, level);
      bm.anchors.push_back(pair);
    }
  }
  return bm;
}

BoundaryAccess::Routed BoundaryAccess::route(uint64_t k, uint64_t s,
                                             uint64_t len) const {
  if (k < 1 || k > ends->size())
    fail(errc::range_error, "boundary index out of range");
  if (s < 1 || len < 1 || len > n || s > n - len + 1)
    fail(errc::range_error, "crossing range out of bounds");
  Routed r;
  r.e = (*ends)[size_t(k - 1)];
  const uint64_t e2 = s + len - 1;
  if (s > r.e + 1 || e2 < r.e)
    fail(errc::routing_error, "range does not meet the boundary seam");
  const uint64_t radius = sprime->radius;
  const uint64_t win_lo = r.e > radius ? r.e - radius : 1;
  if (s < win_lo || e2 > r.e + radius)
    fail(errc::routing_error, "range leaves the boundary window");
  r.sp = sprime->boundary_pos[size_t(k - 1)];
  r.left_len = r.e >= s ? r.e - s + 1 : 0;
  r.right_len = len - r.left_len;
  return r;
}

void BoundaryAccess::emit_left(const BookmarkSet& bm, uint64_t k0, uint64_t ll,
                               Bytes& out) const {
  if (ll == 0) return;
  const uint64_t sp = sprime->boundary_pos[size_t(k0)];
  const auto li = std::lower_bound(bm.levels.begin(), bm.levels.end(), ll);
  if (li == bm.levels.end()) {
    extract_into(*slp_sp, sp - ll + 1, ll, out);  // beyond every level
    return;
  }
  const Anchor& a = bm.at(k0, uint64_t(li - bm.levels.begin())).left;
  if (ll <= a.off) {
    extract_symbol_range(*slp_sp, a.w, a.off - ll + 1, ll, out);
  } else {
    const uint64_t rem = ll - a.off;
    extract_symbol_range(*slp_sp, a.v, slp_sp->exp_len(a.v) - rem + 1, rem, out);
    extract_symbol_range(*slp_sp, a.w, 1, a.off, out);
  }
}

void BoundaryAccess::emit_right(const BookmarkSet& bm, uint64_t k0, uint64_t rl,
                                Bytes& out) const {
  if (rl == 0) return;
  const uint64_t sp = sprime->boundary_pos[size_t(k0)];
  const auto li = std::lower_bound(bm.levels.begin(), bm.levels.end(), rl);
  if (li == bm.levels.end()) {
    extract_into(*slp_sp, sp + 1, rl, out);
    return;
  }
  const Anchor& a = bm.at(k0, uint64_t(li - bm.levels.begin())).right;
  if (a.v == kNoSymbol)
    fail(errc::routing_error, "no leaves to the right of the boundary");
  const uint64_t avail = slp_sp->exp_len(a.v) - a.off + 1;
  if (rl <= avail) {
    extract_symbol_range(*slp_sp, a.v, a.off, rl, out);
  } else {
    extract_symbol_range(*slp_sp, a.v, a.off, avail, out);
    extract_symbol_range(*slp_sp, a.w, 1, rl - avail, out);
  }
}

void BoundaryAccess::pieces_left(const BookmarkSet& bm, uint64_t k0,
                                 uint64_t ll, std::vector<Symbol>& out) const {
  if (ll == 0) return;
  const uint64_t sp = sprime->boundary_pos[size_t(k0)];
  const auto li = std::lower_bound(bm.levels.begin(), bm.levels.end(), ll);
  if (li == bm.levels.end()) {
    decompose_range(*slp_sp, slp_sp->root(), sp - ll + 1, sp, out);
    return;
  }
  const Anchor& a = bm.at(k0, uint64_t(li - bm.levels.begin())).left;
  if (ll <= a.off) {
    const uint64_t from = a.off - ll + 1;
    if (from == 1 && a.off == slp_sp->exp_len(a.w))
      out.push_back(a.w);
    else
      decompose_range(*slp_sp, a.w, from, a.off, out);
  } else {
    const uint64_t rem = ll - a.off;
    decompose_suffix(*slp_sp, a.v, slp_sp->exp_len(a.v) - rem + 1, out);
    decompose_prefix(*slp_sp, a.w, a.off, out);
  }
}

void BoundaryAccess::pieces_right(const BookmarkSet& bm, uint64_t k0,
                                  uint64_t rl, std::vector<Symbol>& out) const {
  if (rl == 0) return;
  const uint64_t sp = sprime->boundary_pos[size_t(k0)];
  const auto li = std::lower_bound(bm.levels.begin(), bm.levels.end(), rl);
  if (li == bm.levels.end()) {
    decompose_range(*slp_sp, slp_sp->root(), sp + 1, sp + rl, out);
    return;
  }
  const Anchor& a = bm.at(k0, uint64_t(li - bm.levels.begin())).right;
  if (a.v == kNoSymbol)
    fail(errc::routing_error, "no leaves to the right of the boundary");
  const uint64_t avail = slp_sp->exp_len(a.v) - a.off + 1;
  if (rl <= avail) {
    decompose_range(*slp_sp, a.v, a.off, a.off + rl - 1, out);
  } else {
    decompose_suffix(*slp_sp, a.v, a.off, out);
    decompose_prefix(*slp_sp, a.w, rl - avail, out);
  }
}

Bytes BoundaryAccess::extract_crossing(uint64_t k, uint64_t s,
                                       uint64_t len) const {
  if (crossing_calls) crossing_calls->fetch_add(1, std::memory_order_relaxed);
  const Routed r = route(k, s, len);
  Bytes out;
  out.reserve(size_t(len));
  emit_left(*marks, k - 1, r.left_len, out);
  emit_right(*marks, k - 1, r.right_len, out);
  return out;
}

std::vector<Symbol> BoundaryAccess::decompose(uint64_t k, uint64_t s,
                                              uint64_t len) const {
  if (crossing_calls) crossing_calls->fetch_add(1, std::memory_order_relaxed);
  const Routed r = route(k, s, len);
  std::vector<Symbol> out;
  pieces_left(*marks, k - 1, r.left_len, out);
  pieces_right(*marks, k - 1, r.right_len, out);
  return out;
}

Fp BoundaryAccess::fp_crossing(uint64_t k, uint64_t s, uint64_t len,
                               Direction dir) const {
  if (fp_marks == nullptr || params == nullptr || sym_fwd == nullptr ||
      sym_bwd == nullptr)
    fail(errc::routing_error,
         "fingerprint anchors are unavailable in this mode");
  if (crossing_calls) crossing_calls->fetch_add(1, std::memory_order_relaxed);
  const Routed r = route(k, s, len);
  std::vector<Symbol> segs;
  pieces_left(*fp_marks, k - 1, r.left_len, segs);
  pieces_right(*fp_marks, k - 1, r.right_len, segs);
  Fp acc = fp_empty();
  if (dir == Direction::forward) {
    for (Symbol sym : segs) acc = concat(*params, acc, (*sym_fwd)[sym]);
  } else {
    for (auto it = segs.rbegin(); it != segs.rend(); ++it)
      acc = concat(*params, acc, (*sym_bwd)[*it]);
  }
  return acc;
}

Bytes BoundaryAccess::extract_any(uint64_t s, uint64_t len) const {
  if (len == 0) return Bytes();
  if (s < 1 || len > n || s > n - len + 1)
    fail(errc::range_error, "extraction range out of bounds");
  const uint64_t e2 = s + len - 1;
  const uint64_t radius = sprime->radius;
  // A usable boundary e satisfies e >= s - 1, e <= e2 (seam overlap) and
  // e >= e2 - radius, e <= s + radius (window containment).
  const uint64_t lo = std::max(s > 1 ? s - 1 : 1, e2 > radius ? e2 - radius : 1);
  const uint64_t hi = std::min(e2, s + radius);
  if (lo <= hi) {
    const auto it = std::lower_bound(ends->begin(), ends->end(), lo);
    if (it != ends->end() && *it <= hi) {
      const uint64_t k = uint64_t(it - ends->begin()) + 1;
      return extract_crossing(k, s, len);
    }
  }
  Bytes out;
  out.reserve(size_t(len));
  extract_into(*slp_s, s, len, out);
  return out;
}

}  // namespace gsi
