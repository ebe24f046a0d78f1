#pragma once

// Scoring of predicted triples against gold rows, and the per-phenomenon
// frequency report.

#include <algorithm>
#include <cstdint>
#include <iomanip>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cnore/extractor.hpp"
#include "cnore/rules.hpp"
#include "json.hpp"

namespace cnore {

/// A triple as read back from TSV or JSON lines. Gold files use the same shape.
struct TripleRow {
  std::string sentence_id;
  std::string arg1;
  std::string relation;
  std::string arg2;
  Phenomenon phenomenon = Phenomenon::SVO;
  bool nmc = false;
  int line = 0;

  friend bool operator==(const TripleRow&, const TripleRow&) = default;
};

inline TripleRow to_row(const Triple& t) {
  return {t.sentence_id, t.arg1, t.relation, t.arg2, t.phenomenon, t.nmc(), 0};
}

inline std::vector<TripleRow> to_rows(const std::vector<Triple>& triples) {
  std::vector<TripleRow> rows;
  rows.reserve(triples.size());
  for (const Triple& t : triples) rows.push_back(to_row(t));
  return rows;
}

namespace detail {

inline bool parse_phenomenon_label(std::string_view s, TripleRow& row) {
  row.nmc = false;
  if (s.size() > 4 && s.substr(s.size() - 4) == "+NMC") {
    row.nmc = true;
    s.remove_suffix(4);
  }
  auto p = phenomenon_from_string(s);
  if (!p) return false;
  row.phenomenon = *p;
  if (*p == Phenomenon::NMC) {
    row.phenomenon = Phenomenon::SVO;
    row.nmc = true;
  }
  return true;
}

}  // namespace detail

/// TSV rows `sentence_id, arg1, relation, arg2, phenomenon`, or JSON-lines
/// objects as written by write_jsonl(). Blank lines are skipped.
inline std::vector<TripleRow> parse_triple_rows(std::string_view text) {
  std::vector<TripleRow> rows;
  int lineno = 0;
  for (std::string_view raw : detail::split(text, '\n')) {
    ++lineno;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    if (detail::trim(raw).empty()) continue;
    auto fail = [&](const std::string& what) {
      return Error("line " + std::to_string(lineno) + ": " + what);
    };
    TripleRow row;
    row.line = lineno;
    if (detail::trim(raw).front() == '{') {
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(raw);
        row.sentence_id = j.at("sentence_id").get<std::string>();
        row.arg1 = j.at("arg1").get<std::string>();
        row.relation = j.at("relation").get<std::string>();
        row.arg2 = j.at("arg2").get<std::string>();
        if (!detail::parse_phenomenon_label(j.at("phenomenon").get<std::string>(), row)) {
          throw fail("unknown phenomenon");
        }
        row.nmc = row.nmc || j.value("arg1_nmc", false) || j.value("arg2_nmc", false);
      } catch (const nlohmann::json::exception& e) {
        throw fail(std::string("bad JSON triple: ") + e.what());
      }
    } else {
      auto cols = detail::split(raw, '\t');
      if (cols.size() != 5) {
        throw fail("expected 5 tab-separated columns, got " + std::to_string(cols.size()));
      }
      row.sentence_id = std::string(cols[0]);
      row.arg1 = std::string(cols[1]);
      row.relation = std::string(cols[2]);
      row.arg2 = std::string(cols[3]);
      if (!detail::parse_phenomenon_label(cols[4], row)) {
        throw fail("unknown phenomenon '" + std::string(cols[4]) + "'");
      }
    }
    if (row.sentence_id.empty() || detail::trim(row.arg1).empty() ||
        detail::trim(row.relation).empty() || detail::trim(row.arg2).empty()) {
      throw fail("empty field");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Keys

inline constexpr char kUnitSeparator = '\x1f';

/// Trims and collapses internal whitespace runs to one space.
inline std::string collapse_whitespace(std::string_view s) {
  std::string out;
  bool pending = false;
  for (char c : s) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
      pending = !out.empty();
      continue;
    }
    if (pending) out += ' ';
    pending = false;
    out += c;
  }
  return out;
}

inline std::string normalize_key(std::string_view sentence_id, std::string_view arg1,
                                 std::string_view relation, std::string_view arg2) {
  std::string key(sentence_id);
  key += kUnitSeparator;
  key += collapse_whitespace(arg1);
  key += kUnitSeparator;
  key += collapse_whitespace(relation);
  key += kUnitSeparator;
  key += collapse_whitespace(arg2);
  return key;
}

inline std::string normalize_triple(const Triple& t) {
  return normalize_key(t.sentence_id, t.arg1, t.relation, t.arg2);
}

inline std::string normalize_triple(const TripleRow& r) {
  return normalize_key(r.sentence_id, r.arg1, r.relation, r.arg2);
}

enum class MatchPolicy { exact, head_only };

inline std::optional<MatchPolicy> match_policy_from_string(std::string_view s) {
  if (s == "exact") return MatchPolicy::exact;
  if (s == "head-only") return MatchPolicy::head_only;
  return std::nullopt;
}

namespace detail {

/// Last space-separated token: the head of a head-final nominal rendering.
inline std::string head_token(std::string_view arg) {
  std::string s = collapse_whitespace(arg);
  auto p = s.rfind(' ');
  return p == std::string::npos ? s : s.substr(p + 1);
}

inline std::string match_key(const TripleRow& r, MatchPolicy policy) {
  if (policy == MatchPolicy::exact) return normalize_triple(r);
  return normalize_key(r.sentence_id, head_token(r.arg1), r.relation, head_token(r.arg2));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Scoring

struct Score {
  std::size_t true_positives = 0;
  std::size_t predicted = 0;
  std::size_t gold = 0;

  double precision() const { return predicted == 0 ? 0.0 : double(true_positives) / double(predicted); }
  double recall() const { return gold == 0 ? 0.0 : double(true_positives) / double(gold); }
  double f1() const {
    double p = precision(), r = recall();
    return p + r == 0.0 ? 0.0 : 2 * p * r / (p + r);
  }

  friend bool operator==(const Score&, const Score&) = default;
};

struct EvalReport {
  Score overall;
  std::map<Phenomenon, Score> per_phenomenon;

  double precision() const { return overall.precision(); }
  double recall() const { return overall.recall(); }
  double f1() const { return overall.f1(); }
};

/// Exact match on normalized keys (or argument heads under head_only).
/// Duplicate keys count once on either side; true positives are credited to
/// the gold row's phenomenon.
inline EvalReport score(const std::vector<TripleRow>& predicted, const std::vector<TripleRow>& gold,
                        MatchPolicy policy = MatchPolicy::exact) {
  std::map<std::string, Phenomenon> gold_keys;
  for (const TripleRow& g : gold) gold_keys.emplace(detail::match_key(g, policy), g.phenomenon);
  std::map<std::string, Phenomenon> pred_keys;
  for (const TripleRow& p : predicted) pred_keys.emplace(detail::match_key(p, policy), p.phenomenon);

  EvalReport r;
  r.overall.gold = gold_keys.size();
  r.overall.predicted = pred_keys.size();
  for (const auto& [key, tag] : gold_keys) ++r.per_phenomenon[tag].gold;
  for (const auto& [key, tag] : pred_keys) {
    ++r.per_phenomenon[tag].predicted;
    if (auto it = gold_keys.find(key); it != gold_keys.end()) {
      ++r.overall.true_positives;
      ++r.per_phenomenon[it->second].true_positives;
    }
  }
  return r;
}

inline EvalReport score(const std::vector<Triple>& predicted, const std::vector<TripleRow>& gold,
                        MatchPolicy policy = MatchPolicy::exact) {
  return score(to_rows(predicted), gold, policy);
}

// ---------------------------------------------------------------------------
// Phenomenon frequencies

/// A percentage held as an integer count of hundredths (2-decimal rounding).
struct Percent {
  std::int64_t hundredths = 0;

  static Percent of(std::size_t count, std::size_t total) {
    if (total == 0) return {};
    // round half up of 10000 * count / total
    auto num = static_cast<std::int64_t>(count) * 20000 + static_cast<std::int64_t>(total);
    return {num / (2 * static_cast<std::int64_t>(total))};
  }
  double value() const { return double(hundredths) / 100.0; }
  std::string str() const {
    std::ostringstream os;
    os << hundredths / 100 << '.' << std::setw(2) << std::setfill('0') << hundredths % 100;
    return os.str();
  }

  friend Percent operator+(Percent a, Percent b) { return {a.hundredths + b.hundredths}; }
  friend bool operator==(const Percent&, const Percent&) = default;
};

/// Each triple falls in exactly one bucket: NMC when an argument was
/// converted, otherwise its phenomenon tag.
struct StatsReport {
  std::size_t total = 0;
  std::size_t nmc = 0;
  std::size_t clvc = 0;
  std::size_t extended_clvc = 0;
  std::size_t iv = 0;
  std::size_t svo = 0;

  std::size_t clvc_family() const { return clvc + extended_clvc; }

  Percent nmc_percent() const { return Percent::of(nmc, total); }
  Percent clvc_percent() const { return Percent::of(clvc_family(), total); }
  Percent light_clvc_percent() const { return Percent::of(clvc, total); }
  Percent extended_clvc_percent() const { return Percent::of(extended_clvc, total); }
  Percent iv_percent() const { return Percent::of(iv, total); }
  Percent svo_percent() const { return Percent::of(svo, total); }
  /// Sum of the three unique-phenomenon percentages.
  Percent combined_percent() const { return nmc_percent() + clvc_percent() + iv_percent(); }
};

inline StatsReport phenomenon_stats(const std::vector<TripleRow>& rows) {
  StatsReport s;
  s.total = rows.size();
  for (const TripleRow& r : rows) {
    if (r.nmc) {
      ++s.nmc;
      continue;
    }
    switch (r.phenomenon) {
      case Phenomenon::NMC: ++s.nmc; break;
      case Phenomenon::CLVC: ++s.clvc; break;
      case Phenomenon::EXTENDED_CLVC: ++s.extended_clvc; break;
      case Phenomenon::IV_LEFT:
      case Phenomenon::IV_RIGHT: ++s.iv; break;
      case Phenomenon::SVO: ++s.svo; break;
    }
  }
  return s;
}

inline StatsReport phenomenon_stats(const std::vector<Triple>& triples) {
  return phenomenon_stats(to_rows(triples));
}

// ---------------------------------------------------------------------------
// Report rendering

namespace detail {

inline std::string fixed4(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4) << v;
  return os.str();
}

}  // namespace detail

inline void write_text(std::ostream& os, const EvalReport& r) {
  os << "precision " << detail::fixed4(r.precision()) << " recall " << detail::fixed4(r.recall())
     << " f1 " << detail::fixed4(r.f1()) << '\n';
  os << "tp " << r.overall.true_positives << " predicted " << r.overall.predicted << " gold "
     << r.overall.gold << '\n';
  if (r.per_phenomenon.empty()) return;
  os << std::left << std::setw(15) << "phenomenon" << std::right << std::setw(6) << "tp"
     << std::setw(6) << "pred" << std::setw(6) << "gold" << std::setw(11) << "precision"
     << std::setw(8) << "recall" << std::setw(8) << "f1" << '\n';
  for (const auto& [tag, s] : r.per_phenomenon) {
    os << std::left << std::setw(15) << to_string(tag) << std::right << std::setw(6)
       << s.true_positives << std::setw(6) << s.predicted << std::setw(6) << s.gold
       << std::setw(11) << detail::fixed4(s.precision()) << std::setw(8)
       << detail::fixed4(s.recall()) << std::setw(8) << detail::fixed4(s.f1()) << '\n';
  }
}

inline nlohmann::ordered_json to_json(const EvalReport& r) {
  auto score_json = [](const Score& s) {
    nlohmann::ordered_json j;
    j["precision"] = s.precision();
    j["recall"] = s.recall();
    j["f1"] = s.f1();
    j["true_positives"] = s.true_positives;
    j["predicted"] = s.predicted;
    j["gold"] = s.gold;
    return j;
  };
  nlohmann::ordered_json j = score_json(r.overall);
  nlohmann::ordered_json per = nlohmann::ordered_json::object();
  for (const auto& [tag, s] : r.per_phenomenon) per[std::string(to_string(tag))] = score_json(s);
  j["per_phenomenon"] = per;
  return j;
}

inline void write_text(std::ostream& os, const StatsReport& s) {
  auto row = [&](std::string_view name, std::size_t count, Percent pct) {
    os << std::left << std::setw(14) << name << std::right << std::setw(7) << count
       << std::setw(9) << pct.str() << '\n';
  };
  os << std::left << std::setw(14) << "category" << std::right << std::setw(7) << "count"
     << std::setw(9) << "percent" << '\n';
  row("NMC", s.nmc, s.nmc_percent());
  row("CLVC", s.clvc_family(), s.clvc_percent());
  row("  light", s.clvc, s.light_clvc_percent());
  row("  extended", s.extended_clvc, s.extended_clvc_percent());
  row("IV", s.iv, s.iv_percent());
  row("SVO", s.svo, s.svo_percent());
  row("total", s.total, s.nmc_percent() + s.clvc_percent() + s.iv_percent() + s.svo_percent());
  row("unique", s.nmc + s.clvc_family() + s.iv, s.combined_percent());
}

inline nlohmann::ordered_json to_json(const StatsReport& s) {
  auto num = [](Percent p) { return nlohmann::ordered_json::parse(p.str()); };
  nlohmann::ordered_json j;
  j["total_triples"] = s.total;
  j["counts"] = {{"NMC", s.nmc},
                 {"CLVC", s.clvc},
                 {"EXTENDED_CLVC", s.extended_clvc},
                 {"IV", s.iv},
                 {"SVO", s.svo}};
  j["percent"] = {{"NMC", num(s.nmc_percent())},
                  {"CLVC", num(s.clvc_percent())},
                  {"CLVC_LIGHT", num(s.light_clvc_percent())},
                  {"EXTENDED_CLVC", num(s.extended_clvc_percent())},
                  {"IV", num(s.iv_percent())},
                  {"SVO", num(s.svo_percent())}};
  j["combined_unique_percent"] = num(s.combined_percent());
  return j;
}

}  // namespace cnore
