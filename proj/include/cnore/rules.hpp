#pragma once

// Phenomenon matchers. Each one tests a fixed dependency configuration around
// a predicate candidate:
//
//   SVO            pred -SBV-> S, pred -VOB-> O
//   CLVC / EXT.    pred -ADV-> P -POB-> E, pred -VOB-> N (N nominal)
//   IV_LEFT        pred -ADV-> P -POB-> E, no nominal VOB on pred
//   IV_RIGHT       pred -CMP-> P -POB-> E, no nominal VOB on pred
//   NMC            head -ATT-> M, head a common noun, M entity-bearing
//
// E is never temporal. CLVC vs EXTENDED_CLVC only records whether the
// predicate is in the light-verb lexicon. Labels come from RuleConfig.

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "cnore/deptree.hpp"
#include "cnore/rule_config.hpp"

namespace cnore {

enum class Phenomenon { SVO, NMC, CLVC, EXTENDED_CLVC, IV_LEFT, IV_RIGHT };

inline std::string_view to_string(Phenomenon p) {
  switch (p) {
    case Phenomenon::SVO: return "SVO";
    case Phenomenon::NMC: return "NMC";
    case Phenomenon::CLVC: return "CLVC";
    case Phenomenon::EXTENDED_CLVC: return "EXTENDED_CLVC";
    case Phenomenon::IV_LEFT: return "IV_LEFT";
    case Phenomenon::IV_RIGHT: return "IV_RIGHT";
  }
  return "?";
}

inline std::optional<Phenomenon> phenomenon_from_string(std::string_view s) {
  for (Phenomenon p : {Phenomenon::SVO, Phenomenon::NMC, Phenomenon::CLVC,
                       Phenomenon::EXTENDED_CLVC, Phenomenon::IV_LEFT, Phenomenon::IV_RIGHT}) {
    if (to_string(p) == s) return p;
  }
  return std::nullopt;
}

struct PatternMatch {
  Phenomenon phenomenon = Phenomenon::SVO;
  TokenIndex predicate = 0;
  std::optional<TokenIndex> subject;
  std::optional<TokenIndex> direct_object;
  std::optional<TokenIndex> preposition;
  std::optional<TokenIndex> prep_object;

  friend bool operator==(const PatternMatch&, const PatternMatch&) = default;
  friend auto operator<=>(const PatternMatch&, const PatternMatch&) = default;
};

/// An NMC head word whose named-entity modifier stands in for it.
struct PseudoEntity {
  TokenIndex head_word = 0;
  TokenIndex entity = 0;

  friend bool operator==(const PseudoEntity&, const PseudoEntity&) = default;
};

/// Nearest candidate to `anchor`; ties go to the leftmost.
inline std::optional<TokenIndex> nearest(const std::vector<TokenIndex>& candidates,
                                         TokenIndex anchor) {
  std::optional<TokenIndex> best;
  for (TokenIndex c : candidates) {
    if (!best || std::abs(c - anchor) < std::abs(*best - anchor) ||
        (std::abs(c - anchor) == std::abs(*best - anchor) && c < *best)) {
      best = c;
    }
  }
  return best;
}

/// Every verbal token, ascending. Chinese clauses may each carry their own
/// predicate without a conjunction, so no single-head assumption is made.
inline std::vector<TokenIndex> find_predicates(const DepTree& tree, const RuleConfig& cfg) {
  std::vector<TokenIndex> out;
  for (const Token& t : tree.tokens()) {
    if (cfg.is_verb(t)) out.push_back(t.index);
  }
  return out;
}

namespace detail {

inline bool is_predicate(const DepTree& tree, TokenIndex pred, const RuleConfig& cfg) {
  return cfg.is_verb(tree.at(pred));
}

inline std::vector<TokenIndex> nominal_objects(const DepTree& tree, TokenIndex pred,
                                               const RuleConfig& cfg) {
  std::vector<TokenIndex> out;
  for (TokenIndex c : tree.children(pred, cfg.labels.direct_object)) {
    if (cfg.is_noun(tree.at(c))) out.push_back(c);
  }
  return out;
}

/// Non-temporal prepositional objects hanging off preposition `prep`.
inline std::vector<TokenIndex> prep_objects(const DepTree& tree, TokenIndex prep,
                                            const RuleConfig& cfg) {
  std::vector<TokenIndex> out;
  for (TokenIndex e : tree.children(prep, cfg.labels.prep_object)) {
    if (!cfg.is_temporal(tree.at(e))) out.push_back(e);
  }
  return out;
}

inline void sort_matches(std::vector<PatternMatch>& v) {
  std::sort(v.begin(), v.end(), [](const PatternMatch& a, const PatternMatch& b) {
    return std::tie(a.preposition, a.prep_object, a.phenomenon) <
           std::tie(b.preposition, b.prep_object, b.phenomenon);
  });
}

}  // namespace detail

inline std::optional<PatternMatch> match_svo(const DepTree& tree, TokenIndex pred,
                                             const RuleConfig& cfg) {
  if (!detail::is_predicate(tree, pred, cfg)) return std::nullopt;
  auto subject = nearest(tree.children(pred, cfg.labels.subject), pred);
  auto object = nearest(tree.children(pred, cfg.labels.direct_object), pred);
  if (!subject || !object) return std::nullopt;
  PatternMatch m;
  m.phenomenon = Phenomenon::SVO;
  m.predicate = pred;
  m.subject = subject;
  m.direct_object = object;
  return m;
}

/// One match per (preposition, prepositional object) pair; the relation
/// phrase is later built from the verb and its direct object only.
inline std::vector<PatternMatch> match_clvc(const DepTree& tree, TokenIndex pred,
                                            const RuleConfig& cfg) {
  std::vector<PatternMatch> out;
  if (!detail::is_predicate(tree, pred, cfg)) return out;
  auto object = nearest(detail::nominal_objects(tree, pred, cfg), pred);
  if (!object) return out;
  const Phenomenon tag =
      cfg.is_light_verb(tree.at(pred)) ? Phenomenon::CLVC : Phenomenon::EXTENDED_CLVC;
  for (TokenIndex prep : tree.children(pred, cfg.labels.prep_adverbial)) {
    for (TokenIndex e : detail::prep_objects(tree, prep, cfg)) {
      PatternMatch m;
      m.phenomenon = tag;
      m.predicate = pred;
      m.direct_object = object;
      m.preposition = prep;
      m.prep_object = e;
      out.push_back(m);
    }
  }
  detail::sort_matches(out);
  return out;
}

/// Intransitive-verb matches. The preposition may sit left of the verb
/// (adverbial attachment) or right of it (complement attachment).
inline std::vector<PatternMatch> match_iv(const DepTree& tree, TokenIndex pred,
                                          const RuleConfig& cfg) {
  std::vector<PatternMatch> out;
  if (!detail::is_predicate(tree, pred, cfg)) return out;
  if (!detail::nominal_objects(tree, pred, cfg).empty()) return out;
  const auto& L = cfg.labels;
  const bool shared = L.prep_adverbial == L.prep_complement;
  for (TokenIndex prep : tree.children(pred)) {
    const std::string& rel = tree.at(prep).deprel;
    std::optional<Phenomenon> tag;
    if (shared) {
      if (rel == L.prep_adverbial) tag = prep < pred ? Phenomenon::IV_LEFT : Phenomenon::IV_RIGHT;
    } else if (rel == L.prep_adverbial) {
      tag = Phenomenon::IV_LEFT;
    } else if (rel == L.prep_complement) {
      tag = Phenomenon::IV_RIGHT;
    }
    if (!tag) continue;
    for (TokenIndex e : detail::prep_objects(tree, prep, cfg)) {
      PatternMatch m;
      m.phenomenon = *tag;
      m.predicate = pred;
      m.preposition = prep;
      m.prep_object = e;
      out.push_back(m);
    }
  }
  detail::sort_matches(out);
  return out;
}

inline std::optional<PseudoEntity> detect_nmc(const DepTree& tree, TokenIndex node,
                                              const RuleConfig& cfg) {
  if (!cfg.is_common_noun(tree.at(node))) return std::nullopt;
  std::vector<TokenIndex> modifiers;
  for (TokenIndex m : tree.children(node, cfg.labels.attribute)) {
    if (cfg.is_entity(tree.at(m))) modifiers.push_back(m);
  }
  auto m = nearest(modifiers, node);
  if (!m) return std::nullopt;
  return PseudoEntity{node, *m};
}

/// The predicate's own subject, else one inherited up the coordination chain
/// (covers a second clause joined without a conjunction).
inline std::optional<TokenIndex> resolve_subject(const DepTree& tree, TokenIndex pred,
                                                 const RuleConfig& cfg) {
  TokenIndex cur = pred;
  for (int steps = 0; steps <= tree.size(); ++steps) {
    if (auto s = nearest(tree.children(cur, cfg.labels.subject), cur)) return s;
    const Token& t = tree.at(cur);
    if (t.deprel != cfg.labels.coordination || !tree.contains(t.head)) break;
    cur = t.head;
  }
  return std::nullopt;
}

}  // namespace cnore
