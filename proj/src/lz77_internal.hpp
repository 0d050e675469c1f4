#pragma once

// Internal: suffix-array artifacts for a text, shared between the parser and
// the trie builders so the array is computed once per build.

#include <vector>

#include "gsi/common.hpp"
#include "gsi/lz77.hpp"

namespace gsi::detail {

struct TextArtifacts {
  std::vector<int32_t> sa;    // 0-based suffix starts, lexicographic order
  std::vector<int32_t> rank;  // inverse of sa
  std::vector<int32_t> lcp;   // lcp[j] = lcp(sa[j-1], sa[j]); lcp[0] = 0
};

TextArtifacts build_text_artifacts(ByteView text);

lz77::Parse parse_with_artifacts(ByteView text, const TextArtifacts& art);

}  // namespace gsi::detail
