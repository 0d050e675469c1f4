#include "gsi/grammar.hpp"

#include <algorithm>
#include <array>
#include <unordered_map>

namespace gsi {

Slp Slp::from_rules(std::vector<Rule> rules, Symbol root) {
  Slp slp;
  slp.rules_ = std::move(rules);
  slp.root_ = root;
  slp.finalize();
  return slp;
}

void Slp::finalize() {
  const uint64_t r = rules_.size();
  if (r == 0) fail(errc::invalid_grammar, "grammar has no rules");
  if (root_ >= r) fail(errc::invalid_grammar, "root symbol is undefined");
  exp_.assign(size_t(r), 0);
  height_.assign(size_t(r), 0);
  std::vector<uint8_t> color(size_t(r), 0);  // 0 new, 1 open, 2 done
  std::vector<Symbol> stk;
  for (Symbol s0 = 0; s0 < r; ++s0) {
    if (color[s0] != 0) continue;
    stk.push_back(s0);
    while (!stk.empty()) {
      const Symbol u = stk.back();
      if (color[u] == 0) {
        color[u] = 1;
        const Rule& ru = rules_[u];
        if (!ru.terminal) {
          for (Symbol child : {ru.right, ru.left}) {
            if (child >= r)
              fail(errc::invalid_grammar,
                   "rule references undefined symbol " + std::to_string(child));
            if (color[child] == 1)
              fail(errc::invalid_grammar, "grammar contains a cycle through symbol " +
                                              std::to_string(child));
            if (color[child] == 0) stk.push_back(child);
          }
        }
      } else if (color[u] == 1) {
        const Rule& ru = rules_[u];
        if (ru.terminal) {
          exp_[u] = 1;
          height_[u] = 0;
        } else {
          // Children may both equal u's sibling entry; they are done by now.
          const uint64_t sum = exp_[ru.left] + exp_[ru.right];
          if (sum < exp_[ru.left])
            fail(errc::invalid_grammar, "expansion length overflows 64 bits");
          exp_[u] = sum;
          height_[u] = 1 + std::max(height_[ru.left], height_[ru.right]);
        }
        color[u] = 2;
        stk.pop_back();
      } else {
        stk.pop_back();
      }
    }
  }
}

namespace {

class BalancedBuilder {
 public:
  explicit BalancedBuilder(ByteView text) : text_(text) {
    term_.fill(kNoSymbol);
    pair_memo_.reserve(text.size() / 2 + 16);
  }

  Symbol run() { return build(0, text_.size()); }
  std::vector<Rule> take_rules() { return std::move(rules_); }

 private:
  Symbol terminal(uint8_t c) {
    Symbol& slot = term_[c];
    if (slot == kNoSymbol) {
      slot = Symbol(rules_.size());
      rules_.push_back(Rule{true, c, kNoSymbol, kNoSymbol});
    }
    return slot;
  }

  Symbol pair(Symbol l, Symbol r) {
    const uint64_t key = (uint64_t(l) << 32) | r;
    auto [it, inserted] = pair_memo_.try_emplace(key, Symbol(rules_.size()));
    if (inserted) rules_.push_back(Rule{false, 0, l, r});
    return it->second;
  }

  Symbol build(uint64_t lo, uint64_t len) {
    if (len == 1) return terminal(uint8_t(text_[size_t(lo)]));
    const uint64_t left_len = (len + 1) / 2;  // left half rounds up
    const Symbol l = build(lo, left_len);
    const Symbol r = build(lo + left_len, len - left_len);
    return pair(l, r);
  }

  ByteView text_;
  std::vector<Rule> rules_;
  std::array<Symbol, 256> term_;
  std::unordered_map<uint64_t, Symbol> pair_memo_;
};

}  // namespace

Slp build_balanced(ByteView text) {
  if (text.empty())
    fail(errc::invalid_input, "cannot build a grammar for an empty text");
  BalancedBuilder b(text);
  const Symbol root = b.run();
  return Slp::from_rules(b.take_rules(), root);
}

namespace {

struct Piece {
  std::string_view body;
  uint64_t line;
};

uint8_t parse_quoted_byte(std::string_view tok, uint64_t line) {
  auto bad = [&]() -> uint8_t {
    fail(errc::invalid_grammar,
         "line " + std::to_string(line) + ": malformed terminal literal");
  };
  if (tok.size() < 3 || tok.front() != '\'' || tok.back() != '\'') return bad();
  std::string_view inner = tok.substr(1, tok.size() - 2);
  if (inner.size() == 1 && inner[0] != '\\') return uint8_t(inner[0]);
  if (inner.empty() || inner[0] != '\\') return bad();
  if (inner.size() == 2) {
    switch (inner[1]) {
      case 'n': return '\n';
      case 't': return '\t';
      case '0': return 0;
      case '\\': return '\\';
      case '\'': return '\'';
      default: return bad();
    }
  }
  if (inner.size() == 4 && inner[1] == 'x') {
    auto hex = [&](char c) -> int {
      if (c >= '0' && c <= '9') return c - '0';
      if (c >= 'a' && c <= 'f') return c - 'a' + 10;
      if (c >= 'A' && c <= 'F') return c - 'A' + 10;
      return -1;
    };
    const int h = hex(inner[2]), l = hex(inner[3]);
    if (h < 0 || l < 0) return bad();
    return uint8_t(h * 16 + l);
  }
  return bad();
}

std::vector<std::string_view> split_tokens(std::string_view s) {
  std::vector<std::string_view> out;
  size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    if (i >= s.size()) break;
    size_t j = i;
    if (s[i] == '\'') {
      // Quoted byte: scan to the closing quote honoring backslash escapes.
      ++j;
      while (j < s.size()) {
        if (s[j] == '\\' && j + 1 < s.size()) {
          j += 2;
          continue;
        }
        if (s[j] == '\'') {
          ++j;
          break;
        }
        ++j;
      }
    } else {
      while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    }
    out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

Slp import_slp(std::string_view listing) {
  // First pass: collect definitions in order.
  struct Def {
    std::string_view name;
    std::vector<std::string_view> rhs;
    uint64_t line;
  };
  std::vector<Def> defs;
  std::unordered_map<std::string_view, Symbol> ids;
  std::string_view root_name;
  bool have_root = false;

  uint64_t line_no = 0;
  size_t pos = 0;
  while (pos <= listing.size()) {
    const size_t eol = listing.find('\n', pos);
    std::string_view line = listing.substr(
        pos, eol == std::string_view::npos ? listing.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? listing.size() + 1 : eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    // Trim and skip blank/comment lines.
    size_t b = line.find_first_not_of(" \t");
    if (b == std::string_view::npos) continue;
    size_t e = line.find_last_not_of(" \t");
    line = line.substr(b, e - b + 1);
    if (line[0] == '#') continue;

    if (line.rfind("root:", 0) == 0) {
      auto toks = split_tokens(line.substr(5));
      if (toks.size() != 1)
        fail(errc::invalid_grammar,
             "line " + std::to_string(line_no) + ": malformed root line");
      if (have_root)
        fail(errc::invalid_grammar,
             "line " + std::to_string(line_no) + ": duplicate root line");
      root_name = toks[0];
      have_root = true;
      continue;
    }

    const size_t arrow = line.find("->");
    if (arrow == std::string_view::npos)
      fail(errc::invalid_grammar,
           "line " + std::to_string(line_no) + ": expected 'name -> ...'");
    auto lhs_toks = split_tokens(line.substr(0, arrow));
    if (lhs_toks.size() != 1)
      fail(errc::invalid_grammar,
           "line " + std::to_string(line_no) + ": malformed rule head");
    Def d;
    d.name = lhs_toks[0];
    d.rhs = split_tokens(line.substr(arrow + 2));
    d.line = line_no;
    if (!ids.emplace(d.name, Symbol(defs.size())).second)
      fail(errc::invalid_grammar, "line " + std::to_string(line_no) +
                                      ": symbol '" + std::string(d.name) +
                                      "' defined more than once");
    defs.push_back(std::move(d));
  }

  if (defs.empty()) fail(errc::invalid_grammar, "listing defines no rules");
  if (!have_root) fail(errc::invalid_grammar, "listing has no root line");
  const auto root_it = ids.find(root_name);
  if (root_it == ids.end())
    fail(errc::invalid_grammar,
         "root symbol '" + std::string(root_name) + "' is never defined");

  // Second pass: materialize rules (forward references are resolved here).
  std::vector<Rule> rules;
  rules.reserve(defs.size());
  for (const Def& d : defs) {
    Rule r;
    if (d.rhs.size() == 1 && !d.rhs[0].empty() && d.rhs[0][0] == '\'') {
      r.terminal = true;
      r.ch = parse_quoted_byte(d.rhs[0], d.line);
    } else if (d.rhs.size() == 2) {
      for (int side = 0; side < 2; ++side) {
        const std::string_view name = d.rhs[size_t(side)];
        if (!name.empty() && name[0] == '\'')
          fail(errc::invalid_grammar,
               "line " + std::to_string(d.line) +
                   ": pair rules must reference named symbols");
        const auto it = ids.find(name);
        if (it == ids.end())
          fail(errc::invalid_grammar, "line " + std::to_string(d.line) +
                                          ": undefined symbol '" +
                                          std::string(name) + "'");
        (side == 0 ? r.left : r.right) = it->second;
      }
    } else {
      fail(errc::invalid_grammar,
           "line " + std::to_string(d.line) +
               ": right-hand side must be one terminal or two symbols");
    }
    rules.push_back(r);
  }
  return Slp::from_rules(std::move(rules), root_it->second);
}

void extract_symbol_range(const Slp& slp, Symbol sym, uint64_t start,
                          uint64_t len, Bytes& out) {
  if (len == 0) return;
  const uint64_t total = slp.exp_len(sym);
  if (start < 1 || len > total || start > total - len + 1)
    fail(errc::range_error, "extraction range [" + std::to_string(start) + ", +" +
                                std::to_string(len) + ") exceeds the expansion");
  struct Frame {
    Symbol s;
    uint64_t a, len;
  };
  std::vector<Frame> stk;
  stk.reserve(slp.height(sym) + 2);
  stk.push_back({sym, start, len});
  while (!stk.empty()) {
    const Frame f = stk.back();
    stk.pop_back();
    const Rule& r = slp.rule(f.s);
    if (r.terminal) {
      out.push_back(char(r.ch));
      continue;
    }
    const uint64_t ll = slp.exp_len(r.left);
    if (f.a + f.len - 1 <= ll) {
      stk.push_back({r.left, f.a, f.len});
    } else if (f.a > ll) {
      stk.push_back({r.right, f.a - ll, f.len});
    } else {
      const uint64_t left_take = ll - f.a + 1;
      stk.push_back({r.right, 1, f.len - left_take});
      stk.push_back({r.left, f.a, left_take});
    }
  }
}

void extract_into(const Slp& slp, uint64_t start, uint64_t len, Bytes& out) {
  extract_symbol_range(slp, slp.root(), start, len, out);
}

Bytes extract(const Slp& slp, uint64_t start, uint64_t len) {
  Bytes out;
  out.reserve(size_t(len));
  extract_into(slp, start, len, out);
  return out;
}

ValidationReport validate_grammar(const Slp& slp, const Bytes* expected_text) {
  ValidationReport rep;
  rep.rules = slp.size();
  rep.height = slp.height();
  rep.length = slp.text_len();
  rep.ok = true;
  rep.message = "structurally sound";
  if (expected_text != nullptr) {
    if (rep.length != expected_text->size()) {
      rep.matches_text = false;
    } else {
      rep.matches_text = extract(slp, 1, rep.length) == *expected_text;
    }
    if (!rep.matches_text) {
      rep.ok = false;
      rep.message = "expansion disagrees with the expected text";
    }
  }
  return rep;
}

void decompose_range(const Slp& slp, Symbol sym, uint64_t a, uint64_t b,
                     std::vector<Symbol>& out) {
  if (a < 1 || b > slp.exp_len(sym) || a > b)
    fail(errc::range_error, "decomposition range out of bounds");
  Symbol cur = sym;
  uint64_t la = a, lb = b;
  while (true) {
    if (la == 1 && lb == slp.exp_len(cur)) {
      out.push_back(cur);
      return;
    }
    const Rule& r = slp.rule(cur);
    // A proper sub-range of a terminal cannot exist (length 1).
    const uint64_t ll = slp.exp_len(r.left);
    if (lb <= ll) {
      cur = r.left;
    } else if (la > ll) {
      la -= ll;
      lb -= ll;
      cur = r.right;
    } else {
      decompose_suffix(slp, r.left, la, out);
      decompose_prefix(slp, r.right, lb - ll, out);
      return;
    }
  }
}

void decompose_prefix(const Slp& slp, Symbol sym, uint64_t b,
                      std::vector<Symbol>& out) {
  if (b < 1 || b > slp.exp_len(sym))
    fail(errc::range_error, "prefix decomposition out of bounds");
  Symbol cur = sym;
  while (true) {
    if (b == slp.exp_len(cur)) {
      out.push_back(cur);
      return;
    }
    const Rule& r = slp.rule(cur);
    const uint64_t ll = slp.exp_len(r.left);
    if (b <= ll) {
      cur = r.left;
    } else {
      out.push_back(r.left);
      b -= ll;
      cur = r.right;
    }
  }
}

void decompose_suffix(const Slp& slp, Symbol sym, uint64_t a,
                      std::vector<Symbol>& out) {
  if (a < 1 || a > slp.exp_len(sym))
    fail(errc::range_error, "suffix decomposition out of bounds");
  Symbol cur = sym;
  std::vector<Symbol> pending;
  while (a != 1) {
    const Rule& r = slp.rule(cur);
    const uint64_t ll = slp.exp_len(r.left);
    if (a <= ll) {
      pending.push_back(r.right);
      cur = r.left;
    } else {
      a -= ll;
      cur = r.right;
    }
  }
  out.push_back(cur);
  while (!pending.empty()) {
    out.push_back(pending.back());
    pending.pop_back();
  }
}

}  // namespace gsi
