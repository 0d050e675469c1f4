#include "gsi/oracle.hpp"

#include <algorithm>

namespace gsi::oracle {

lz77::Parse naive_lz77(ByteView text) {
  if (text.empty()) fail(errc::invalid_input, "cannot parse an empty text");
  const uint64_t n = text.size();
  lz77::Parse out;
  out.n = n;
  uint64_t i = 1;
  while (i <= n) {
    uint64_t best = 0, src = 0;
    for (uint64_t p = 1; p < i; ++p) {
      // How far text[p..] and text[i..] agree, capped so the occurrence at p
      // ends before i and stays inside the text.
      const uint64_t cap = std::min(i - p, n - i + 1);
      uint64_t ext = 0;
      while (ext < cap && text[size_t(p - 1 + ext)] == text[size_t(i - 1 + ext)])
        ++ext;
      if (ext > best) {
        best = ext;
        src = p;
      }
    }
    lz77::Phrase ph;
    ph.start = i;
    ph.copy_len = best;
    ph.source_start = best > 0 ? src : 0;
    uint64_t advance = best;
    if (i + best <= n) {
      ph.trailing = static_cast<unsigned char>(text[size_t(i + best - 1)]);
      ++advance;
    }
    i += advance;
    out.ends.push_back(i - 1);
    out.phrases.push_back(std::move(ph));
  }
  return out;
}

std::vector<uint64_t> naive_locate(ByteView text, ByteView pattern) {
  std::vector<uint64_t> out;
  if (pattern.empty() || pattern.size() > text.size()) return out;
  for (uint64_t p = 1; p + pattern.size() - 1 <= text.size(); ++p)
    if (text.compare(size_t(p - 1), pattern.size(), pattern) == 0)
      out.push_back(p);
  return out;
}

std::vector<ClassifiedOccurrence> naive_classify(
    ByteView text, const std::vector<uint64_t>& ends, ByteView pattern) {
  std::vector<ClassifiedOccurrence> out;
  for (uint64_t p : naive_locate(text, pattern)) {
    const uint64_t last = p + pattern.size() - 1;
    bool primary = false;
    for (uint64_t e : ends)
      if (p <= e && e <= last) {
        primary = true;
        break;
      }
    out.push_back({p, primary});
  }
  return out;
}

std::vector<uint32_t> brute_report(const std::vector<Point>& points,
                                   uint64_t x1, uint64_t x2, uint64_t y1,
                                   uint64_t y2) {
  std::vector<uint32_t> out;
  for (const Point& pt : points)
    if (x1 <= pt.x && pt.x <= x2 && y1 <= pt.y && pt.y <= y2)
      out.push_back(pt.id);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<uint32_t> brute_covering(const std::vector<Interval>& intervals,
                                     uint64_t s, uint64_t e) {
  std::vector<uint32_t> out;
  for (const Interval& iv : intervals)
    if (iv.lo <= s && e <= iv.hi) out.push_back(iv.id);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<uint64_t> naive_cyclic(ByteView text, ByteView pattern) {
  std::vector<uint64_t> out;
  const uint64_t m = pattern.size();
  if (m == 0 || m > text.size()) return out;
  for (uint64_t j = 0; j < m; ++j) {
    Bytes rot(pattern.substr(size_t(j)));
    rot.append(pattern.substr(0, size_t(j)));
    if (!naive_locate(text, rot).empty()) out.push_back(j);
  }
  return out;
}

std::vector<std::pair<uint64_t, uint64_t>> naive_maximal(ByteView text,
                                                         ByteView pattern) {
  std::vector<std::pair<uint64_t, uint64_t>> out;
  const uint64_t m = pattern.size();
  auto occurs = [&](uint64_t h, uint64_t j) {
    return !naive_locate(text, pattern.substr(size_t(h - 1), size_t(j - h + 1)))
                .empty();
  };
  for (uint64_t h = 1; h <= m; ++h)
    for (uint64_t j = h; j <= m; ++j) {
      if (!occurs(h, j)) continue;
      if (h > 1 && occurs(h - 1, j)) continue;
      if (j < m && occurs(h, j + 1)) continue;
      out.emplace_back(h, j);
    }
  return out;
}

}  // namespace gsi::oracle
