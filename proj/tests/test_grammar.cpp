#include <doctest.h>

#include <map>
#include <random>

#include "gsi/grammar.hpp"
#include "support/util.hpp"

using namespace gsi;

namespace {

Bytes expand_symbol(const Slp& slp, Symbol s,
                    std::map<Symbol, Bytes>& memo) {
  auto it = memo.find(s);
  if (it != memo.end()) return it->second;
  Bytes out;
  if (slp.is_terminal(s)) {
    out.push_back(char(slp.rule(s).ch));
  } else {
    out = expand_symbol(slp, slp.left(s), memo) +
          expand_symbol(slp, slp.right(s), memo);
  }
  memo.emplace(s, out);
  return out;
}

const char* kFibListing = R"(
# Fibonacci-style grammar
root: X7
X1 -> 'b'
X2 -> 'a'
X3 -> X2 X1
X4 -> X3 X2
X5 -> X4 X3
X6 -> X5 X4
X7 -> X6 X5
)";

}  // namespace

TEST_CASE("balanced grammar over the running example") {
  const Bytes text = "abaababaabaab$";
  const Slp slp = build_balanced(text);
  CHECK(slp.text_len() == 14);
  CHECK(slp.height() == ceil_log2(14));  // == 4
  CHECK(extract(slp, 1, 14) == text);
  CHECK(extract(slp, 8, 5) == "aabaa");
  CHECK(extract(slp, 1, 0).empty());

  for (uint64_t i = 1; i <= 14; ++i)
    for (uint64_t len = 0; len + i - 1 <= 14; ++len)
      REQUIRE(extract(slp, i, len) == text.substr(size_t(i - 1), size_t(len)));
}

TEST_CASE("balanced grammar height is exactly ceil(log2 n)") {
  std::mt19937_64 rng(7);
  for (uint64_t len = 1; len <= 200; ++len) {
    const Bytes text = testutil::random_text(rng, len, 3);
    const Slp slp = build_balanced(text);
    CAPTURE(len);
    REQUIRE(slp.height() == ceil_log2(len));
    REQUIRE(extract(slp, 1, len) == text);
  }
}

TEST_CASE("identical subtrees are shared") {
  // a^16 needs one terminal plus one pair per doubling level.
  CHECK(build_balanced(Bytes(16, 'a')).size() == 5);
  // abab splits into two identical halves.
  CHECK(build_balanced("abab").size() == 4);
}

TEST_CASE("imported staircase grammar") {
  const Slp slp = import_slp(kFibListing);
  REQUIRE(slp.size() == 7);
  CHECK(slp.text_len() == 13);
  CHECK(extract(slp, 1, 13) == "abaababaabaab");
  CHECK(slp.height() == 5);  // terminals at height 0

  const uint64_t want_exp[] = {1, 1, 2, 3, 5, 8, 13};
  for (Symbol s = 0; s < 7; ++s) CHECK(slp.exp_len(s) == want_exp[s]);

  const ValidationReport rep = validate_grammar(slp, nullptr);
  CHECK(rep.ok);
  CHECK(rep.rules == 7);
  CHECK(rep.height == 5);
  CHECK(rep.length == 13);

  Bytes expected = "abaababaabaab";
  CHECK(validate_grammar(slp, &expected).matches_text);
  Bytes wrong = "abaababaabaaX";
  const ValidationReport bad = validate_grammar(slp, &wrong);
  CHECK_FALSE(bad.matches_text);
  CHECK_FALSE(bad.ok);
}

TEST_CASE("import accepts escapes and comments, assigns ids in order") {
  const Slp slp = import_slp(
      "# header\n"
      "A -> '\\n'\n"
      "B -> '\\x41'\n"
      "root: R\n"
      "R -> A B\n");
  CHECK(slp.size() == 3);
  CHECK(slp.root() == 2);
  CHECK(extract(slp, 1, 2) == "\nA");
}

TEST_CASE("import rejects malformed listings") {
  auto rejects = [](std::string_view listing) {
    CHECK_THROWS_WITH_AS(import_slp(listing),
                         doctest::Contains("invalid-grammar"), error);
  };
  rejects("");                                     // no rules
  rejects("A -> 'a'\n");                           // no root
  rejects("root: Z\nA -> 'a'\n");                  // root undefined
  rejects("root: A\nA -> 'a'\nA -> 'b'\n");        // duplicate definition
  rejects("root: A\nA -> B C\nB -> 'a'\n");        // undefined reference
  rejects("root: A\nA -> B B B\nB -> 'a'\n");      // non-binary
  rejects("root: A\nA -> 'ab'\n");                 // malformed literal
  rejects("root: A\nA -> A B\nB -> 'a'\n");        // direct cycle
  rejects("root: A\nA -> B C\nB -> 'a'\nC -> A B\n");  // indirect cycle
}

TEST_CASE("expansion length overflow is rejected") {
  std::string listing = "root: P63\nT -> 'a'\nP0 -> T T\n";
  for (int k = 1; k <= 63; ++k)
    listing += "P" + std::to_string(k) + " -> P" + std::to_string(k - 1) +
               " P" + std::to_string(k - 1) + "\n";
  CHECK_THROWS_WITH_AS(import_slp(listing),
                       doctest::Contains("invalid-grammar"), error);
}

TEST_CASE("extraction range checks") {
  const Slp slp = build_balanced("abcabc");
  CHECK_THROWS_WITH_AS(extract(slp, 0, 3), doctest::Contains("range-error"),
                       error);
  CHECK_THROWS_WITH_AS(extract(slp, 5, 3), doctest::Contains("range-error"),
                       error);
  CHECK_THROWS_WITH_AS(extract(slp, 7, 1), doctest::Contains("range-error"),
                       error);
  CHECK(extract(slp, 6, 1) == "c");
}

TEST_CASE("decompositions concatenate to the requested range") {
  std::mt19937_64 rng(99);
  for (int rep = 0; rep < 30; ++rep) {
    const uint64_t len = 1 + testutil::bounded(rng, 257);
    const Bytes text = testutil::random_text(rng, len, 4);
    const Slp slp = build_balanced(text);
    std::map<Symbol, Bytes> memo;
    for (int q = 0; q < 20; ++q) {
      const uint64_t a = 1 + testutil::bounded(rng, len);
      const uint64_t b = a + testutil::bounded(rng, len - a + 1);
      std::vector<Symbol> segs;
      decompose_range(slp, slp.root(), a, b, segs);
      CHECK(segs.size() <= 2 * size_t(slp.height()) + 2);
      Bytes glued;
      for (Symbol s : segs) glued += expand_symbol(slp, s, memo);
      REQUIRE(glued == text.substr(size_t(a - 1), size_t(b - a + 1)));
    }
    std::vector<Symbol> pre, suf;
    decompose_prefix(slp, slp.root(), len, pre);
    CHECK(pre == std::vector<Symbol>{slp.root()});
    decompose_suffix(slp, slp.root(), 1, suf);
    CHECK(suf == std::vector<Symbol>{slp.root()});
  }
}
