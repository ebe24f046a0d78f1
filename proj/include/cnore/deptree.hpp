#pragma once

// Dependency-tree data model, CoNLL-X / CoNLL-U ingestion and serialization,
// and structural validation.

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cnore {

/// 1-based token position; 0 denotes the artificial root.
using TokenIndex = int;

inline constexpr TokenIndex kRoot = 0;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Token {
  TokenIndex index = 0;
  std::string form;
  std::string pos;
  TokenIndex head = 0;
  std::string deprel;
  std::optional<std::string> ner;

  friend bool operator==(const Token&, const Token&) = default;
};

/// A sentence. Trees obtained from parse_conll() in strict mode satisfy the
/// rootedness and acyclicity invariants; validate() checks them for any tree.
class DepTree {
 public:
  DepTree() = default;
  DepTree(std::string sentence_id, std::vector<Token> tokens)
      : sentence_id_(std::move(sentence_id)), tokens_(std::move(tokens)) {
    children_.resize(tokens_.size() + 1);
    for (const Token& t : tokens_) {
      if (t.index >= 1 && t.index <= size() && t.head >= 0 && t.head <= size() &&
          t.head != t.index) {
        children_[static_cast<std::size_t>(t.head)].push_back(t.index);
      }
    }
  }

  const std::string& sentence_id() const { return sentence_id_; }
  const std::vector<Token>& tokens() const { return tokens_; }
  int size() const { return static_cast<int>(tokens_.size()); }
  bool empty() const { return tokens_.empty(); }

  bool contains(TokenIndex i) const { return i >= 1 && i <= size(); }

  const Token& at(TokenIndex i) const {
    if (!contains(i)) {
      throw Error("sentence " + sentence_id_ + ": token index " +
                  std::to_string(i) + " out of range");
    }
    return tokens_[static_cast<std::size_t>(i - 1)];
  }

  /// Direct dependents of `i` (0 for root dependents), ascending.
  const std::vector<TokenIndex>& children(TokenIndex i) const {
    if (i != kRoot && !contains(i)) at(i);
    return children_[static_cast<std::size_t>(i)];
  }

  /// Dependents of `i` attached with `label`, ascending.
  std::vector<TokenIndex> children(TokenIndex i, std::string_view label) const {
    std::vector<TokenIndex> out;
    for (TokenIndex c : children(i)) {
      if (at(c).deprel == label) out.push_back(c);
    }
    return out;
  }

  /// First token attached to the root, if any.
  std::optional<TokenIndex> root() const {
    const auto& r = children_.empty() ? kEmpty : children_[0];
    if (r.empty()) return std::nullopt;
    return r.front();
  }

  friend bool operator==(const DepTree& a, const DepTree& b) {
    return a.sentence_id_ == b.sentence_id_ && a.tokens_ == b.tokens_;
  }

 private:
  static inline const std::vector<TokenIndex> kEmpty{};
  std::string sentence_id_;
  std::vector<Token> tokens_;
  std::vector<std::vector<TokenIndex>> children_;
};

enum class Dialect { conllx, conllu };

enum class Validation {
  strict,   // rootedness/acyclicity violations are parse errors
  deferred  // only column-level errors; call validate() afterwards
};

inline std::optional<Dialect> dialect_from_string(std::string_view s) {
  if (s == "conllx") return Dialect::conllx;
  if (s == "conllu") return Dialect::conllu;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Validation

enum class Violation {
  bad_index,
  empty_form,
  self_loop,
  head_out_of_range,
  no_root,
  multiple_roots,
  cycle
};

inline std::string_view to_string(Violation v) {
  switch (v) {
    case Violation::bad_index: return "bad-index";
    case Violation::empty_form: return "empty-form";
    case Violation::self_loop: return "self-loop";
    case Violation::head_out_of_range: return "head-out-of-range";
    case Violation::no_root: return "no-root";
    case Violation::multiple_roots: return "multiple-roots";
    case Violation::cycle: return "cycle";
  }
  return "unknown";
}

struct Diagnostic {
  Violation violation;
  TokenIndex token;
  std::string message;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

/// Empty iff every DepTree/Token invariant holds.
inline std::vector<Diagnostic> validate(const DepTree& tree) {
  std::vector<Diagnostic> out;
  const int n = tree.size();
  auto add = [&](Violation v, TokenIndex k, std::string msg) {
    out.push_back({v, k, std::move(msg)});
  };

  std::vector<TokenIndex> roots;
  for (int pos = 1; pos <= n; ++pos) {
    const Token& t = tree.tokens()[static_cast<std::size_t>(pos - 1)];
    if (t.index != pos) {
      add(Violation::bad_index, pos,
          "token at position " + std::to_string(pos) + " has index " +
              std::to_string(t.index));
    }
    if (t.form.empty()) add(Violation::empty_form, pos, "empty form at index " + std::to_string(pos));
    if (t.head == pos) {
      add(Violation::self_loop, pos, "self-loop at index " + std::to_string(pos));
    } else if (t.head < 0 || t.head > n) {
      add(Violation::head_out_of_range, pos,
          "head " + std::to_string(t.head) + " out of range at index " + std::to_string(pos));
    } else if (t.head == kRoot) {
      roots.push_back(pos);
    }
  }
  if (n > 0 && roots.empty()) add(Violation::no_root, 0, "no token attached to root");
  if (roots.size() > 1) {
    std::string msg = "multiple roots at indices";
    for (TokenIndex r : roots) msg += " " + std::to_string(r);
    add(Violation::multiple_roots, roots[1], msg);
  }

  // Every token must reach the root. A head walk that revisits a node ends
  // on a cycle; each cycle is reported once, at its smallest member.
  std::vector<char> on_cycle(static_cast<std::size_t>(n + 1), 0);
  for (int start = 1; start <= n; ++start) {
    std::vector<char> seen(static_cast<std::size_t>(n + 1), 0);
    int cur = start;
    while (cur >= 1 && cur <= n && !seen[static_cast<std::size_t>(cur)]) {
      seen[static_cast<std::size_t>(cur)] = 1;
      int h = tree.tokens()[static_cast<std::size_t>(cur - 1)].head;
      if (h == cur) { cur = -1; break; }  // reported as self-loop
      cur = h;
    }
    if (cur >= 1 && cur <= n && seen[static_cast<std::size_t>(cur)]) {
      // cur is on the cycle; collect its members
      std::vector<TokenIndex> members;
      int c = cur;
      do {
        members.push_back(c);
        c = tree.tokens()[static_cast<std::size_t>(c - 1)].head;
      } while (c != cur);
      TokenIndex smallest = *std::min_element(members.begin(), members.end());
      if (!on_cycle[static_cast<std::size_t>(smallest)]) {
        for (TokenIndex m : members) on_cycle[static_cast<std::size_t>(m)] = 1;
        std::sort(members.begin(), members.end());
        std::string msg = "cycle through indices";
        for (TokenIndex m : members) msg += " " + std::to_string(m);
        add(Violation::cycle, smallest, msg);
      }
    }
  }
  return out;
}

inline bool is_valid(const DepTree& tree) { return validate(tree).empty(); }

// ---------------------------------------------------------------------------
// Traversal

/// Transitive dependent closure of `node` (node included), ascending.
inline std::vector<TokenIndex> subtree_tokens(const DepTree& tree, TokenIndex node) {
  if (!tree.contains(node)) {
    throw Error("sentence " + tree.sentence_id() + ": invalid node " + std::to_string(node));
  }
  std::vector<TokenIndex> out;
  std::vector<char> seen(static_cast<std::size_t>(tree.size() + 1), 0);
  std::vector<TokenIndex> stack{node};
  while (!stack.empty()) {
    TokenIndex cur = stack.back();
    stack.pop_back();
    if (seen[static_cast<std::size_t>(cur)]) continue;
    seen[static_cast<std::size_t>(cur)] = 1;
    out.push_back(cur);
    for (TokenIndex c : tree.children(cur)) stack.push_back(c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Forms of `indices` joined by single spaces.
inline std::string join_forms(const DepTree& tree, const std::vector<TokenIndex>& indices) {
  std::string s;
  for (TokenIndex i : indices) {
    if (!s.empty()) s += ' ';
    s += tree.at(i).form;
  }
  return s;
}

// ---------------------------------------------------------------------------
// CoNLL reading

namespace detail {

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t p = s.find(sep, start);
    out.push_back(s.substr(start, p == std::string_view::npos ? p : p - start));
    if (p == std::string_view::npos) break;
    start = p + 1;
  }
  return out;
}

inline std::string_view trim(std::string_view s) {
  const char* ws = " \t\r\n";
  std::size_t b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  std::size_t e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline std::optional<int> to_int(std::string_view s) {
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return v;
}

inline std::optional<std::string> ner_from_misc(std::string_view misc) {
  if (misc == "_") return std::nullopt;
  for (std::string_view kv : split(misc, '|')) {
    if (kv.substr(0, 3) == "NE=" && kv.size() > 3) return std::string(kv.substr(3));
  }
  return std::nullopt;
}

struct Block {
  std::string sentence_id;
  int first_line = 0;
  std::vector<std::pair<int, std::string>> lines;  // (line number, text)
};

inline DepTree build_tree(const Block& b, Dialect dialect, Validation validation) {
  std::vector<Token> tokens;
  auto fail = [&](int line, const std::string& what) -> Error {
    return Error("sentence " + b.sentence_id + ", line " + std::to_string(line) + ": " + what);
  };
  for (const auto& [lineno, text] : b.lines) {
    auto cols = split(text, '\t');
    if (cols.size() < 8) {
      throw fail(lineno, "expected at least 8 tab-separated columns, got " +
                             std::to_string(cols.size()));
    }
    if (dialect == Dialect::conllu &&
        (cols[0].find('-') != std::string_view::npos || cols[0].find('.') != std::string_view::npos)) {
      continue;  // multiword token or empty node
    }
    auto id = to_int(cols[0]);
    if (!id) throw fail(lineno, "non-numeric token id '" + std::string(cols[0]) + "'");
    if (*id != static_cast<int>(tokens.size()) + 1) {
      throw fail(lineno, "token id " + std::to_string(*id) + " out of sequence");
    }
    auto head = to_int(cols[6]);
    if (!head) throw fail(lineno, "non-numeric head '" + std::string(cols[6]) + "'");
    if (cols[1].empty()) throw fail(lineno, "empty form");
    Token t;
    t.index = *id;
    t.form = std::string(cols[1]);
    t.pos = cols[3] == "_" ? std::string() : std::string(cols[3]);
    t.head = *head;
    t.deprel = cols[7] == "_" ? std::string() : std::string(cols[7]);
    if (cols.size() >= 10) t.ner = ner_from_misc(cols[9]);
    tokens.push_back(std::move(t));
  }
  DepTree tree(b.sentence_id, std::move(tokens));
  if (validation == Validation::strict) {
    auto diags = validate(tree);
    if (!diags.empty()) {
      const Diagnostic& d = diags.front();
      int line = b.first_line;
      for (const auto& [lineno, text] : b.lines) {
        auto id = to_int(split(text, '\t')[0]);
        if (id && *id == d.token) { line = lineno; break; }
      }
      throw fail(line, std::string(to_string(d.violation)) + ": " + d.message);
    }
  }
  return tree;
}

}  // namespace detail

/// One input block: a tree, or the error that kept it from becoming one.
struct ParsedSentence {
  std::string sentence_id;
  int first_line = 0;
  std::optional<DepTree> tree;
  std::string error;
};

/// Block-by-block parse; an error in one block does not affect the others.
inline std::vector<ParsedSentence> parse_conll_blocks(std::string_view text, Dialect dialect,
                                                      Validation validation = Validation::strict) {
  std::vector<ParsedSentence> out;
  detail::Block block;
  int ordinal = 0;
  bool have_id = false;

  auto flush = [&] {
    if (!block.lines.empty()) {
      ++ordinal;
      if (!have_id) block.sentence_id = std::to_string(ordinal);
      ParsedSentence ps;
      ps.sentence_id = block.sentence_id;
      ps.first_line = block.first_line;
      try {
        ps.tree = detail::build_tree(block, dialect, validation);
      } catch (const Error& e) {
        ps.error = e.what();
      }
      out.push_back(std::move(ps));
    }
    block = {};
    have_id = false;
  };

  int lineno = 0;
  for (std::string_view raw : detail::split(text, '\n')) {
    ++lineno;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    if (detail::trim(raw).empty()) {
      flush();
      continue;
    }
    if (block.first_line == 0) block.first_line = lineno;
    if (dialect == Dialect::conllu && raw.front() == '#') {
      std::string_view body = detail::trim(raw.substr(1));
      if (body.substr(0, 7) == "sent_id") {
        std::string_view rest = detail::trim(body.substr(7));
        if (!rest.empty() && rest.front() == '=') rest = detail::trim(rest.substr(1));
        block.sentence_id = std::string(rest);
        have_id = true;
      }
      continue;
    }
    block.lines.emplace_back(lineno, std::string(raw));
  }
  flush();
  return out;
}

/// Parses blank-line-separated sentence blocks. Sentence ids come from a
/// `# sent_id` comment (CoNLL-U) or default to the 1-based block ordinal.
/// Throws on the first bad block.
inline std::vector<DepTree> parse_conll(std::string_view text, Dialect dialect,
                                        Validation validation = Validation::strict) {
  std::vector<DepTree> out;
  for (ParsedSentence& ps : parse_conll_blocks(text, dialect, validation)) {
    if (!ps.tree) throw Error(ps.error);
    out.push_back(std::move(*ps.tree));
  }
  return out;
}

/// Inverse of parse_conll for (form, pos, head, deprel, ner) and, in
/// CoNLL-U, the sentence id.
inline std::string serialize_conll(const std::vector<DepTree>& trees, Dialect dialect) {
  std::ostringstream os;
  for (const DepTree& tree : trees) {
    if (dialect == Dialect::conllu) os << "# sent_id = " << tree.sentence_id() << '\n';
    for (const Token& t : tree.tokens()) {
      const std::string& pos = t.pos.empty() ? std::string("_") : t.pos;
      os << t.index << '\t' << t.form << "\t_\t" << pos << '\t' << pos << "\t_\t" << t.head
         << '\t' << (t.deprel.empty() ? "_" : t.deprel) << "\t_\t"
         << (t.ner ? "NE=" + *t.ner : std::string("_")) << '\n';
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace cnore
