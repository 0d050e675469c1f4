// Binary index files: round trips, determinism, and rejection of malformed
// input (bad magic, wrong version, truncation, corruption, bogus framing).

#include "gsi/serialize.hpp"

#include <algorithm>
#include <functional>
#include <vector>

#include "doctest.h"
#include "gsi/corpus.hpp"
#include "gsi/index.hpp"

namespace gsi {
namespace {

const Bytes kExample = "abaababaabaab";
const IndexMode kModes[] = {IndexMode::verify, IndexMode::fingerprint};

BuildOptions with_mode(IndexMode m) {
  BuildOptions o;
  o.mode = m;
  return o;
}

std::vector<uint64_t> positions(const std::vector<Occurrence>& occ) {
  std::vector<uint64_t> out;
  out.reserve(occ.size());
  for (const Occurrence& o : occ) out.push_back(o.pos);
  return out;
}

uint64_t offset_of(const std::function<void()>& op) {
  try {
    op();
  } catch (const error& e) {
    CHECK(e.code() == errc::format_error);
    return e.offset();
  }
  FAIL("expected a format-error");
  return ~uint64_t{0};
}

TEST_CASE("serialize: round trip preserves the index in both modes") {
  for (IndexMode m : kModes) {
    CAPTURE(int(m));
    const SelfIndex idx = build_index(kExample, with_mode(m));
    const Bytes file = save_index(idx);
    const SelfIndex back = load_index(file);
    CHECK(back == idx);
    CHECK(back.n() == idx.n());

    // The loaded index must answer queries through every component.
    CHECK(positions(locate(back, "ab")) ==
          std::vector<uint64_t>{1, 4, 6, 9, 12});
    CHECK(count(back, "aba") == count(idx, "aba"));
    CHECK(extract(back, 1, back.n()) == kExample);
    CHECK(cyclic_matches(back, "ba") == cyclic_matches(idx, "ba"));
    CHECK(maximal_substrings(back, "bb") == maximal_substrings(idx, "bb"));
  }
}

TEST_CASE("serialize: byte-identical output for equal indexes") {
  for (IndexMode m : kModes) {
    CAPTURE(int(m));
    const Bytes a = save_index(build_index(kExample, with_mode(m)));
    const Bytes b = save_index(build_index(kExample, with_mode(m)));
    CHECK(a == b);
    CHECK(save_index(load_index(a)) == a);
  }
}

TEST_CASE("serialize: section table is fixed and accounts for the file") {
  const Bytes file = save_index(build_index(kExample, {}));
  const auto sizes = section_sizes(file);
  REQUIRE(sizes.size() == 12);
  CHECK(sizes[0].first == "PARAMS");
  CHECK(sizes[1].first == "PARSE");
  CHECK(sizes[11].first == "SYMBOL_FPS");
  uint64_t total = 4 + 4 + 4;  // magic + version + checksum
  for (const auto& [name, size] : sizes) total += 8 + size;
  CHECK(total == file.size());
  CHECK(sizes[0].second == 8 + 4 + 8 + 8 + 1 + 1 + 8 + 8 + 256 * 2);
}

TEST_CASE("serialize: verification mode stores no fingerprint tables") {
  const Bytes file =
      save_index(build_index(kExample, with_mode(IndexMode::verify)));
  const auto sizes = section_sizes(file);
  CHECK(sizes[6].first == "FP_BOOKMARKS");
  CHECK(sizes[6].second == 16);  // two zero counts
  CHECK(sizes[11].first == "SYMBOL_FPS");
  CHECK(sizes[11].second == 16);
}

TEST_CASE("serialize: bad magic is rejected at offset 0") {
  Bytes file = save_index(build_index(kExample, {}));
  file[0] = 'X';
  CHECK(offset_of([&] { load_index(file); }) == 0);
  CHECK(offset_of([&] { section_sizes(file); }) == 0);
  CHECK(offset_of([] { load_index(""); }) == 0);
  CHECK(offset_of([] { load_index("GSI"); }) == 0);
}

TEST_CASE("serialize: unknown format version is rejected at offset 4") {
  Bytes file = save_index(build_index(kExample, {}));
  file[4] = char(kIndexFormatVersion + 1);
  CHECK(offset_of([&] { load_index(file); }) == 4);
}

TEST_CASE("serialize: corruption anywhere fails the checksum") {
  const Bytes file = save_index(build_index(kExample, {}));
  for (size_t at : {size_t(8), file.size() / 3, file.size() - 5}) {
    Bytes bad = file;
    bad[at] = char(bad[at] ^ 0x40);
    CHECK(offset_of([&] { load_index(bad); }) == file.size() - 4);
  }
  // Flipping the stored checksum itself is also a mismatch.
  Bytes bad = file;
  bad.back() = char(bad.back() ^ 1);
  CHECK(offset_of([&] { load_index(bad); }) == file.size() - 4);
}

TEST_CASE("serialize: every truncation is rejected") {
  const Bytes file = save_index(build_index(kExample, {}));
  for (size_t len = 0; len < file.size(); len += 97)
    CHECK_THROWS_AS(load_index(ByteView(file).substr(0, len)), error);
  CHECK_THROWS_AS(load_index(ByteView(file).substr(0, file.size() - 1)),
                  error);
  for (size_t len : {size_t(8), size_t(9), size_t(11)})
    CHECK(offset_of([&] { load_index(ByteView(file).substr(0, len)); }) ==
          len);
}

TEST_CASE("serialize: framing that cheats the checksum is still rejected") {
  // Rewrite the first section length to swallow the rest of the file, then
  // fix the checksum: the framing check must catch it anyway.
  Bytes file = save_index(build_index(kExample, {}));
  const auto patch_u64 = [&](size_t at, uint64_t v) {
    for (int i = 0; i < 8; ++i) file[at + i] = char((v >> (8 * i)) & 0xFF);
  };
  patch_u64(8, file.size());
  // Recompute the trailing checksum the same way the writer does.
  const Bytes body = file.substr(0, file.size() - 4);
  uint32_t crc = 0xFFFFFFFFu;
  for (unsigned char ch : body) {
    crc ^= ch;
    for (int k = 0; k < 8; ++k)
      crc = (crc & 1) ? 0xEDB88320u ^ (crc >> 1) : crc >> 1;
  }
  crc ^= 0xFFFFFFFFu;
  for (int i = 0; i < 4; ++i)
    file[file.size() - 4 + i] = char((crc >> (8 * i)) & 0xFF);
  CHECK(offset_of([&] { load_index(file); }) == 8);
}

TEST_CASE("serialize: round trip on generated corpora") {
  for (IndexMode m : kModes) {
    CAPTURE(int(m));
    const Bytes text = gen_corpus(300, 20, 0.003, 11);
    const SelfIndex idx = build_index(text, with_mode(m));
    const Bytes file = save_index(idx);
    const SelfIndex back = load_index(file);
    CHECK(back == idx);
    const Bytes probe = text.substr(17, 9);
    CHECK(locate(back, probe) == locate(idx, probe));
    CHECK(extract(back, 5, 40) == extract(idx, 5, 40));
  }
}

TEST_CASE("serialize: single-character text round trips") {
  const SelfIndex idx = build_index("a", {});
  const SelfIndex back = load_index(save_index(idx));
  CHECK(back == idx);
  CHECK(positions(locate(back, "a")) == std::vector<uint64_t>{1});
}

}  // namespace
}  // namespace gsi
