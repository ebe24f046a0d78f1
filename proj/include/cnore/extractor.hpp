#pragma once

#include <algorithm>
#include <cstddef>
#include <future>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "cnore/deptree.hpp"
#include "cnore/rule_config.hpp"
#include "cnore/rules.hpp"
#include "json.hpp"

namespace cnore {

struct Triple {
  std::string sentence_id;
  std::string arg1;
  std::string relation;
  std::string arg2;
  Phenomenon phenomenon = Phenomenon::SVO;
  bool arg1_nmc = false;  // arg1 went through pseudo-entity conversion
  bool arg2_nmc = false;
  TokenIndex predicate_index = 0;
  std::vector<TokenIndex> arg1_indices;
  std::vector<TokenIndex> arg2_indices;

  bool nmc() const { return arg1_nmc || arg2_nmc; }

  friend bool operator==(const Triple&, const Triple&) = default;
};

/// Phenomenon column value: the tag, with `+NMC` when an argument was converted.
inline std::string phenomenon_label(const Triple& t) {
  std::string s(to_string(t.phenomenon));
  if (t.nmc()) s += "+NMC";
  return s;
}

/// A rendered argument slot.
struct Argument {
  std::string text;
  std::vector<TokenIndex> indices;
  bool converted = false;

  friend bool operator==(const Argument&, const Argument&) = default;
};

/// Entity-bearing heads render as their own form. Other heads render as the
/// head plus the full subtrees of its attribute dependents.
inline Argument render_nominal(const DepTree& tree, TokenIndex node, const RuleConfig& cfg) {
  if (cfg.is_entity(tree.at(node))) return {tree.at(node).form, {node}, false};
  std::vector<TokenIndex> span{node};
  for (TokenIndex c : tree.children(node, cfg.labels.attribute)) {
    auto sub = subtree_tokens(tree, c);
    span.insert(span.end(), sub.begin(), sub.end());
  }
  std::sort(span.begin(), span.end());
  return {join_forms(tree, span), span, false};
}

/// Replaces an NMC head word by its entity modifier.
inline Argument convert_pseudo_entity(const DepTree& tree, TokenIndex node, const RuleConfig& cfg) {
  if (auto pe = detect_nmc(tree, node, cfg)) {
    Argument a = render_nominal(tree, pe->entity, cfg);
    a.converted = true;
    return a;
  }
  return render_nominal(tree, node, cfg);
}

/// Verb alone for SVO; verb + direct object for (extended) CLVC with the
/// preposition left out; verb + preposition for IV, in that order whatever
/// side of the verb the preposition is on.
inline std::string render_relation(const DepTree& tree, const PatternMatch& m, const RuleConfig& cfg) {
  const std::string& verb = tree.at(m.predicate).form;
  switch (m.phenomenon) {
    case Phenomenon::CLVC:
    case Phenomenon::EXTENDED_CLVC:
      return verb + " " + render_nominal(tree, *m.direct_object, cfg).text;
    case Phenomenon::IV_LEFT:
    case Phenomenon::IV_RIGHT:
      return verb + " " + tree.at(*m.preposition).form;
    case Phenomenon::SVO:
    case Phenomenon::NMC:
      break;
  }
  return verb;
}

namespace detail {

inline Triple make_triple(const DepTree& tree, const PatternMatch& m, TokenIndex subject,
                          TokenIndex object, const RuleConfig& cfg) {
  Argument a1 = convert_pseudo_entity(tree, subject, cfg);
  Argument a2 = convert_pseudo_entity(tree, object, cfg);
  Triple t;
  t.sentence_id = tree.sentence_id();
  t.arg1 = std::move(a1.text);
  t.relation = render_relation(tree, m, cfg);
  t.arg2 = std::move(a2.text);
  t.phenomenon = m.phenomenon;
  t.arg1_nmc = a1.converted;
  t.arg2_nmc = a2.converted;
  t.predicate_index = m.predicate;
  t.arg1_indices = std::move(a1.indices);
  t.arg2_indices = std::move(a2.indices);
  return t;
}

inline std::string describe(const DepTree& tree, TokenIndex i) {
  return std::to_string(i) + ":" + tree.at(i).form;
}

}  // namespace detail

/// Per predicate: CLVC matches win, then IV, then SVO. CLVC/IV take their
/// subject from resolve_subject(); without one the predicate yields nothing.
/// When `trace` is given, one line per predicate is appended to it.
inline std::vector<Triple> extract_sentence(const DepTree& tree, const RuleConfig& cfg,
                                            std::vector<std::string>* trace = nullptr) {
  if (auto diags = validate(tree); !diags.empty()) {
    throw Error("sentence " + tree.sentence_id() + ": invalid tree: " + diags.front().message);
  }
  std::vector<Triple> out;
  auto note = [&](TokenIndex pred, const std::string& what) {
    if (trace) trace->push_back(tree.sentence_id() + "\t" + detail::describe(tree, pred) + "\t" + what);
  };

  for (TokenIndex pred : find_predicates(tree, cfg)) {
    auto clvc = match_clvc(tree, pred, cfg);
    auto iv = clvc.empty() ? match_iv(tree, pred, cfg) : std::vector<PatternMatch>{};
    const auto& prepositional = clvc.empty() ? iv : clvc;
    if (!prepositional.empty()) {
      const std::string tag(to_string(prepositional.front().phenomenon));
      auto subject = resolve_subject(tree, pred, cfg);
      if (!subject) {
        note(pred, tag + " matched but no subject resolved; dropped");
        continue;
      }
      std::string line = tag + " subject=" + detail::describe(tree, *subject);
      for (const PatternMatch& m : prepositional) {
        line += " prep=" + detail::describe(tree, *m.preposition) +
                  " pobj=" + detail::describe(tree, *m.prep_object);
        out.push_back(detail::make_triple(tree, m, *subject, *m.prep_object, cfg));
      }
      if (!clvc.empty()) {
        line += " object=" + detail::describe(tree, *clvc.front().direct_object) + " (SVO suppressed)";
      }
      note(pred, line);
      continue;
    }
    if (auto svo = match_svo(tree, pred, cfg)) {
      out.push_back(detail::make_triple(tree, *svo, *svo->subject, *svo->direct_object, cfg));
      note(pred, "SVO subject=" + detail::describe(tree, *svo->subject) +
                     " object=" + detail::describe(tree, *svo->direct_object));
      continue;
    }
    const bool has_subject = !tree.children(pred, cfg.labels.subject).empty();
    const bool has_object = !tree.children(pred, cfg.labels.direct_object).empty();
    note(pred, std::string("none: ") +
                   (has_subject ? "" : "no subject dependent; ") +
                   (has_object ? "" : "no direct object; ") + "no prepositional phrase");
  }

  std::stable_sort(out.begin(), out.end(), [](const Triple& a, const Triple& b) {
    return std::tie(a.predicate_index, a.phenomenon, a.arg2_indices) <
           std::tie(b.predicate_index, b.phenomenon, b.arg2_indices);
  });
  return out;
}

struct SentenceError {
  std::string sentence_id;
  std::string message;

  friend bool operator==(const SentenceError&, const SentenceError&) = default;
};

struct CorpusResult {
  std::vector<Triple> triples;
  std::vector<SentenceError> errors;
  std::vector<std::string> trace;
};

struct ExtractOptions {
  unsigned jobs = 1;  // worker shards; 0 picks hardware concurrency
  bool trace = false;
};

/// Sentences are processed independently; results are concatenated in input
/// order whatever the sharding.
inline CorpusResult extract_corpus(const std::vector<DepTree>& trees, const RuleConfig& cfg,
                                   ExtractOptions opts = {}) {
  struct Slot {
    std::vector<Triple> triples;
    std::vector<std::string> trace;
    std::optional<SentenceError> error;
  };
  std::vector<Slot> slots(trees.size());
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      try {
        slots[i].triples = extract_sentence(trees[i], cfg, opts.trace ? &slots[i].trace : nullptr);
      } catch (const Error& e) {
        slots[i].error = SentenceError{trees[i].sentence_id(), e.what()};
      }
    }
  };

  unsigned jobs = opts.jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : opts.jobs;
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(1, trees.size())));
  if (jobs <= 1) {
    work(0, trees.size());
  } else {
    std::vector<std::future<void>> shards;
    const std::size_t chunk = (trees.size() + jobs - 1) / jobs;
    for (std::size_t b = 0; b < trees.size(); b += chunk) {
      shards.push_back(std::async(std::launch::async, work, b, std::min(trees.size(), b + chunk)));
    }
    for (auto& f : shards) f.get();
  }

  CorpusResult result;
  for (Slot& s : slots) {
    result.triples.insert(result.triples.end(), std::make_move_iterator(s.triples.begin()),
                          std::make_move_iterator(s.triples.end()));
    result.trace.insert(result.trace.end(), s.trace.begin(), s.trace.end());
    if (s.error) result.errors.push_back(std::move(*s.error));
  }
  return result;
}

// ---------------------------------------------------------------------------
// Output

inline void write_tsv(std::ostream& os, const std::vector<Triple>& triples) {
  for (const Triple& t : triples) {
    os << t.sentence_id << '\t' << t.arg1 << '\t' << t.relation << '\t' << t.arg2 << '\t'
       << phenomenon_label(t) << '\n';
  }
}

inline nlohmann::ordered_json to_json(const Triple& t) {
  nlohmann::ordered_json j;
  j["sentence_id"] = t.sentence_id;
  j["arg1"] = t.arg1;
  j["relation"] = t.relation;
  j["arg2"] = t.arg2;
  j["phenomenon"] = std::string(to_string(t.phenomenon));
  j["arg1_nmc"] = t.arg1_nmc;
  j["arg2_nmc"] = t.arg2_nmc;
  j["predicate_index"] = t.predicate_index;
  j["arg1_indices"] = t.arg1_indices;
  j["arg2_indices"] = t.arg2_indices;
  return j;
}

inline void write_jsonl(std::ostream& os, const std::vector<Triple>& triples) {
  for (const Triple& t : triples) os << to_json(t).dump() << '\n';
}

}  // namespace cnore
