#pragma once

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cnore/deptree.hpp"

namespace cnore {

/// Dependency label for each structural role the matchers use.
struct LabelMap {
  std::string subject = "SBV";
  std::string direct_object = "VOB";
  std::string prep_adverbial = "ADV";
  std::string prep_complement = "CMP";
  std::string prep_object = "POB";
  std::string attribute = "ATT";
  std::string coordination = "COO";
  std::string root = "HED";
};

/// Label inventory and lexical classes. Defaults follow the LTP/HIT scheme.
struct RuleConfig {
  LabelMap labels;
  std::set<std::string> verb_pos{"v"};
  std::set<std::string> entity_pos{"nh", "ns", "ni"};
  std::set<std::string> temporal_pos{"nt"};
  std::set<std::string> noun_pos{"n", "nh", "ns", "ni", "nz"};
  std::set<std::string> light_verbs{"是", "建立", "达成", "进行", "举行", "作出", "给予", "加以", "开展"};

  bool is_verb(const Token& t) const { return verb_pos.count(t.pos) > 0; }
  bool is_noun(const Token& t) const { return noun_pos.count(t.pos) > 0; }
  bool is_temporal(const Token& t) const { return temporal_pos.count(t.pos) > 0; }
  bool is_light_verb(const Token& t) const { return light_verbs.count(t.form) > 0; }

  /// A present NER tag decides ("O" means no entity); otherwise the POS class.
  bool is_entity(const Token& t) const {
    if (t.ner) return !t.ner->empty() && *t.ner != "O";
    return entity_pos.count(t.pos) > 0;
  }

  /// Common noun: nominal POS outside the entity classes, and not NER-tagged.
  bool is_common_noun(const Token& t) const {
    return is_noun(t) && entity_pos.count(t.pos) == 0 && !is_entity(t);
  }

  /// Human-readable invariant violations; empty when the config is usable.
  std::vector<std::string> problems() const {
    std::vector<std::string> out;
    const std::vector<std::pair<std::string_view, const std::string*>> roles{
        {"subject", &labels.subject},
        {"direct_object", &labels.direct_object},
        {"prep_adverbial", &labels.prep_adverbial},
        {"prep_complement", &labels.prep_complement},
        {"prep_object", &labels.prep_object},
        {"attribute", &labels.attribute},
        {"coordination", &labels.coordination},
        {"root", &labels.root}};
    for (const auto& [name, label] : roles) {
      if (label->empty()) out.push_back("label for role '" + std::string(name) + "' is empty");
    }
    for (std::size_t i = 0; i < roles.size(); ++i) {
      for (std::size_t j = i + 1; j < roles.size(); ++j) {
        if (roles[i].second->empty() || *roles[i].second != *roles[j].second) continue;
        // the two prepositional attachment roles may share a label
        if (roles[i].first == "prep_adverbial" && roles[j].first == "prep_complement") continue;
        out.push_back("roles '" + std::string(roles[i].first) + "' and '" +
                      std::string(roles[j].first) + "' share label '" + *roles[i].second + "'");
      }
    }
    for (const auto& p : entity_pos) {
      if (!noun_pos.count(p)) out.push_back("entity_pos tag '" + p + "' is not in noun_pos");
    }
    return out;
  }
};

namespace detail {

inline std::set<std::string> parse_list(std::string_view value) {
  std::set<std::string> out;
  for (std::string_view item : split(value, ',')) {
    item = trim(item);
    if (!item.empty()) out.emplace(item);
  }
  return out;
}

}  // namespace detail

/// Reads `key = value` lines over the defaults. `#` starts a comment line.
/// Unknown keys, missing `=`, and invariant violations are errors.
inline RuleConfig parse_rule_config(std::string_view text) {
  RuleConfig cfg;
  int lineno = 0;
  for (std::string_view raw : detail::split(text, '\n')) {
    ++lineno;
    std::string_view line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error("rules line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    std::string key(detail::trim(line.substr(0, eq)));
    std::string_view value = detail::trim(line.substr(eq + 1));

    std::string* label = nullptr;
    if (key == "subject") label = &cfg.labels.subject;
    else if (key == "direct_object") label = &cfg.labels.direct_object;
    else if (key == "prep_adverbial") label = &cfg.labels.prep_adverbial;
    else if (key == "prep_complement") label = &cfg.labels.prep_complement;
    else if (key == "prep_object") label = &cfg.labels.prep_object;
    else if (key == "attribute") label = &cfg.labels.attribute;
    else if (key == "coordination") label = &cfg.labels.coordination;
    else if (key == "root") label = &cfg.labels.root;

    if (label) *label = std::string(value);
    else if (key == "verb_pos") cfg.verb_pos = detail::parse_list(value);
    else if (key == "entity_pos") cfg.entity_pos = detail::parse_list(value);
    else if (key == "temporal_pos") cfg.temporal_pos = detail::parse_list(value);
    else if (key == "noun_pos") cfg.noun_pos = detail::parse_list(value);
    else if (key == "light_verbs") cfg.light_verbs = detail::parse_list(value);
    else throw Error("rules line " + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
  if (auto p = cfg.problems(); !p.empty()) throw Error("invalid rule config: " + p.front());
  return cfg;
}

inline RuleConfig load_rule_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read rule config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_rule_config(ss.str());
}

}  // namespace cnore
