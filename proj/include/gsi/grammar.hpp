#pragma once

// Straight-line programs (SLPs) in binary normal form: every rule is either a
// terminal byte or an ordered pair of symbols, and the grammar derives exactly
// one string. `build_balanced` produces a midpoint-split grammar whose parse
// tree has height exactly ceil(log2 n) with identical subtrees shared, so a
// substring of length len is extracted in O(len + log n).
//
// `import_slp` reads a textual rule listing:
//
//     # comment (whole line)
//     root: R
//     R -> A B        (binary rule: exactly two symbol names)
//     A -> 'a'        (terminal rule: one quoted byte)
//     B -> '\x0a'     (escapes: \' \\ \n \t \0 \xNN)
//
// Symbol ids are assigned in definition order; forward references are fine.
// Anything else — duplicate or missing definitions, non-binary right-hand
// sides, cycles, expansion lengths overflowing 64 bits — is invalid-grammar.

#include <cstdint>
#include <string>
#include <vector>

#include "gsi/common.hpp"

namespace gsi {

using Symbol = uint32_t;
inline constexpr Symbol kNoSymbol = ~Symbol{0};

struct Rule {
  bool terminal = false;
  uint8_t ch = 0;              // terminal byte (terminal rules)
  Symbol left = kNoSymbol;     // children (pair rules)
  Symbol right = kNoSymbol;
  bool operator==(const Rule&) const = default;
};

class Slp {
 public:
  Slp() = default;

  // Validates indices, detects cycles, computes expansion lengths and
  // heights. Throws invalid-grammar on any structural violation.
  static Slp from_rules(std::vector<Rule> rules, Symbol root);

  uint64_t size() const { return rules_.size(); }
  Symbol root() const { return root_; }
  const Rule& rule(Symbol s) const { return rules_[s]; }
  const std::vector<Rule>& rules() const { return rules_; }

  bool is_terminal(Symbol s) const { return rules_[s].terminal; }
  Symbol left(Symbol s) const { return rules_[s].left; }
  Symbol right(Symbol s) const { return rules_[s].right; }

  // Length of the string a symbol expands to / height of its parse tree
  // (terminals have height 0, a pair is one above its taller child).
  uint64_t exp_len(Symbol s) const { return exp_[s]; }
  uint32_t height(Symbol s) const { return height_[s]; }

  uint64_t text_len() const { return exp_[root_]; }
  uint32_t height() const { return height_[root_]; }

  bool operator==(const Slp& o) const {
    return rules_ == o.rules_ && root_ == o.root_;
  }

 private:
  void finalize();

  std::vector<Rule> rules_;
  std::vector<uint64_t> exp_;
  std::vector<uint32_t> height_;
  Symbol root_ = kNoSymbol;
};

// Balanced grammar for a non-empty text (empty -> invalid-input).
Slp build_balanced(ByteView text);

// Parse a textual rule listing (see above).
Slp import_slp(std::string_view listing);

// Expansion substring [start, start+len-1], 1-based, of the whole grammar.
// Out-of-range -> range-error. O(len + height).
void extract_into(const Slp& slp, uint64_t start, uint64_t len, Bytes& out);
Bytes extract(const Slp& slp, uint64_t start, uint64_t len);

// Same, but relative to an arbitrary symbol's expansion.
void extract_symbol_range(const Slp& slp, Symbol sym, uint64_t start,
                          uint64_t len, Bytes& out);

struct ValidationReport {
  uint64_t rules = 0;
  uint32_t height = 0;
  uint64_t length = 0;
  bool matches_text = false;  // meaningful when an expected text was given
  bool ok = false;
  std::string message;
};

// Structural summary plus (optionally) a full comparison of the expansion
// against an expected text.
ValidationReport validate_grammar(const Slp& slp, const Bytes* expected_text);

// Ordered symbol runs whose expansions concatenate to the requested range of
// sym's expansion (1-based, inclusive). Appends O(height) symbols.
void decompose_range(const Slp& slp, Symbol sym, uint64_t a, uint64_t b,
                     std::vector<Symbol>& out);
void decompose_prefix(const Slp& slp, Symbol sym, uint64_t b,
                      std::vector<Symbol>& out);
void decompose_suffix(const Slp& slp, Symbol sym, uint64_t a,
                      std::vector<Symbol>& out);

}  // namespace gsi
