#include "gsi/lz77.hpp"

#include <algorithm>

#include "lz77_internal.hpp"
#include "suffix_internal.hpp"

namespace gsi {
namespace detail {

TextArtifacts build_text_artifacts(ByteView text) {
  TextArtifacts art;
  art.sa = suffix_array_bytes(text);
  art.rank = invert_permutation(art.sa);
  art.lcp = lcp_array_bytes(text, art.sa, art.rank);
  return art;
}

lz77::Parse parse_with_artifacts(ByteView text, const TextArtifacts& art) {
  const uint64_t n = text.size();
  lz77::Parse out;
  out.n = n;

  MinSegTree lcp_min(art.lcp);
  std::vector<int32_t> starts(art.sa.begin(), art.sa.end());
  MinSegTree pos_min(starts);

  // Rank interval of all suffixes sharing a length-len prefix with the suffix
  // of rank r, then the smallest start position in that interval. The phrase
  // candidate of length len at position i (1-based) is viable iff some
  // occurrence of text[i..i+len-1] ends before i.
  auto min_occurrence = [&](int64_t r, int64_t len) -> uint64_t {
    const int64_t below = lcp_min.last_below(r, int32_t(len));
    const int64_t lo = below < 0 ? 0 : below;  // lcp[0] is a sentinel 0
    const int64_t above = lcp_min.first_below(r + 1, int32_t(len));
    const int64_t hi = above < 0 ? int64_t(n) - 1 : above - 1;
    return uint64_t(pos_min.range_min(lo, hi)) + 1;  // 1-based
  };

  uint64_t i = 1;
  while (i <= n) {
    uint64_t best = 0, src = 0;
    if (i > 1) {
      const int64_t r = art.rank[size_t(i - 1)];
      uint64_t lo = 1, hi = std::min<uint64_t>(n - i + 1, i - 1);
      while (lo <= hi) {
        const uint64_t mid = lo + (hi - lo) / 2;
        if (min_occurrence(r, int64_t(mid)) + mid <= i) {
          best = mid;
          lo = mid + 1;
        } else {
          hi = mid - 1;
        }
      }
      if (best > 0) src = min_occurrence(r, int64_t(best));
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

}  // namespace detail

namespace lz77 {

Parse parse(ByteView text) {
  if (text.empty()) fail(errc::invalid_input, "cannot parse an empty text");
  return detail::parse_with_artifacts(text, detail::build_text_artifacts(text));
}

Bytes decode(const Parse& parse) {
  Bytes out;
  out.reserve(parse.n);
  if (parse.phrases.size() != parse.ends.size())
    fail(errc::corrupt_parse, "phrase/end count mismatch");
  for (size_t k = 0; k < parse.phrases.size(); ++k) {
    const Phrase& ph = parse.phrases[k];
    if (ph.start != out.size() + 1)
      fail(errc::corrupt_parse, "phrase " + std::to_string(k + 1) +
                                    " does not start where the previous ended");
    if (ph.copy_len == 0) {
      if (ph.source_start != 0)
        fail(errc::corrupt_parse, "literal phrase with a source");
      if (!ph.trailing)
        fail(errc::corrupt_parse, "empty phrase");
    } else {
      if (ph.source_start == 0)
        fail(errc::corrupt_parse, "copying phrase without a source");
      if (ph.source_start + ph.copy_len - 1 >= ph.start)
        fail(errc::corrupt_parse,
             "phrase " + std::to_string(k + 1) + " source overlaps the phrase");
      for (uint64_t t = 0; t < ph.copy_len; ++t)
        out.push_back(out[size_t(ph.source_start - 1 + t)]);
    }
    if (ph.trailing) out.push_back(char(*ph.trailing));
    if (out.size() != parse.ends[k])
      fail(errc::corrupt_parse,
           "phrase " + std::to_string(k + 1) + " end position mismatch");
  }
  if (out.size() != parse.n)
    fail(errc::corrupt_parse, "decoded length disagrees with the parse");
  return out;
}

}  // namespace lz77
}  // namespace gsi
