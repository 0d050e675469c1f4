#pragma once

// Naive reference implementations used by the test suites to cross-check the
// production data structures. Everything here favors obvious correctness over
// speed (quadratic/cubic scans) and shares no logic with the production code
// paths. Built as a separate test-support library; not part of the release
// library.

#include <cstdint>
#include <utility>
#include <vector>

#include "gsi/common.hpp"
#include "gsi/lz77.hpp"

namespace gsi::oracle {

// Greedy leftmost-longest parse by direct scanning.
lz77::Parse naive_lz77(ByteView text);

// All 1-based occurrence positions of pattern in text, ascending.
std::vector<uint64_t> naive_locate(ByteView text, ByteView pattern);

struct ClassifiedOccurrence {
  uint64_t pos = 0;
  bool primary = false;  // occurrence straddles (or touches) a phrase end
  bool operator==(const ClassifiedOccurrence&) const = default;
};

// Occurrences of pattern classified against phrase end positions: an
// occurrence [p, p+m-1] is primary iff it contains some end position.
std::vector<ClassifiedOccurrence> naive_classify(
    ByteView text, const std::vector<uint64_t>& ends, ByteView pattern);

struct Point {
  uint64_t x = 0, y = 0;
  uint32_t id = 0;
};

// Ids of points inside [x1,x2] x [y1,y2], ascending by id.
std::vector<uint32_t> brute_report(const std::vector<Point>& points,
                                   uint64_t x1, uint64_t x2, uint64_t y1,
                                   uint64_t y2);

struct Interval {
  uint64_t lo = 0, hi = 0;
  uint32_t id = 0;
};

// Ids of intervals fully covering [s, e], ascending by id.
std::vector<uint32_t> brute_covering(const std::vector<Interval>& intervals,
                                     uint64_t s, uint64_t e);

// Rotation offsets j in [0, m) such that pattern[j+1..m] + pattern[1..j]
// occurs in text, ascending.
std::vector<uint64_t> naive_cyclic(ByteView text, ByteView pattern);

// Maximal occurring intervals (h, j) of the pattern, 1-based inclusive,
// sorted: pattern[h..j] occurs in text while neither the one-char extension
// to the left nor to the right (where defined) does.
std::vector<std::pair<uint64_t, uint64_t>> naive_maximal(ByteView text,
                                                         ByteView pattern);

}  // namespace gsi::oracle
