#pragma once

// Batch front end: extract, eval, stats, validate. Exit status 0 on success,
// 1 on bad data (invalid sentences, malformed rows), 2 on usage or I/O errors.

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cnore/deptree.hpp"
#include "cnore/evalstats.hpp"
#include "cnore/extractor.hpp"
#include "cnore/rule_config.hpp"
#include "json.hpp"

namespace cnore::cli {

inline constexpr int kOk = 0;
inline constexpr int kDataError = 1;
inline constexpr int kUsageError = 2;

struct InvocationConfig {
  std::string subcommand;
  std::string input;   // empty: standard input
  std::string output;  // empty: standard output
  std::string dialect = "conllu";
  std::string emit = "tsv";
  std::string rules;
  std::string gold;
  std::string match = "exact";
  bool trace = false;
  unsigned jobs = 1;
};

/// Raised for conditions that map to exit status 2.
class UsageError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline std::string slurp(std::istream& in) {
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string read_input(const std::string& path, std::istream& stdin_stream) {
  if (path.empty() || path == "-") return slurp(stdin_stream);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  return slurp(in);
}

/// Buffers data output and writes it in one piece at the end so that a
/// failing command never leaves partial data behind.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& stdout_stream) : path_(path), out_(stdout_stream) {}
  std::ostream& stream() { return buf_; }
  void commit() {
    if (path_.empty() || path_ == "-") {
      out_ << buf_.str();
      out_.flush();
      return;
    }
    std::ofstream f(path_, std::ios::binary);
    if (!f) throw UsageError("cannot write '" + path_ + "'");
    f << buf_.str();
  }

 private:
  std::string path_;
  std::ostream& out_;
  std::ostringstream buf_;
};

inline Dialect dialect_or_throw(const std::string& s) {
  if (auto d = dialect_from_string(s)) return *d;
  throw UsageError("unknown dialect '" + s + "'");
}

}  // namespace detail

inline int run_extract(const InvocationConfig& cfg, std::istream& in, std::ostream& out,
                       std::ostream& err) {
  RuleConfig rules;
  if (!cfg.rules.empty()) {
    try {
      rules = load_rule_config(cfg.rules);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
  }
  const Dialect dialect = detail::dialect_or_throw(cfg.dialect);
  std::string text = detail::read_input(cfg.input, in);

  std::vector<DepTree> trees;
  std::vector<SentenceError> errors;
  for (ParsedSentence& ps : parse_conll_blocks(text, dialect, Validation::deferred)) {
    if (ps.tree) trees.push_back(std::move(*ps.tree));
    else errors.push_back({ps.sentence_id, ps.error});
  }
  CorpusResult result = extract_corpus(trees, rules, {cfg.jobs, cfg.trace});
  errors.insert(errors.end(), result.errors.begin(), result.errors.end());

  for (const std::string& line : result.trace) err << "trace\t" << line << '\n';
  detail::Sink sink(cfg.output, out);
  if (cfg.emit == "json") write_jsonl(sink.stream(), result.triples);
  else write_tsv(sink.stream(), result.triples);
  sink.commit();
  for (const SentenceError& e : errors) err << "error: " << e.message << '\n';
  return errors.empty() ? kOk : kDataError;
}

inline int run_eval(const InvocationConfig& cfg, std::istream& in, std::ostream& out,
                    std::ostream& err) {
  auto policy = match_policy_from_string(cfg.match);
  if (!policy) throw UsageError("unknown match policy '" + cfg.match + "'");
  std::string gold_text = detail::read_input(cfg.gold, in);
  std::string pred_text = detail::read_input(cfg.input, in);
  std::vector<TripleRow> gold, predicted;
  try {
    gold = parse_triple_rows(gold_text);
  } catch (const Error& e) {
    err << "error: gold " << e.what() << '\n';
    return kDataError;
  }
  try {
    predicted = parse_triple_rows(pred_text);
  } catch (const Error& e) {
    err << "error: predictions " << e.what() << '\n';
    return kDataError;
  }
  EvalReport report = score(predicted, gold, *policy);
  detail::Sink sink(cfg.output, out);
  if (cfg.emit == "json") sink.stream() << to_json(report).dump(2) << '\n';
  else write_text(sink.stream(), report);
  sink.commit();
  return kOk;
}

inline int run_stats(const InvocationConfig& cfg, std::istream& in, std::ostream& out,
                     std::ostream& err) {
  std::vector<TripleRow> rows;
  try {
    rows = parse_triple_rows(detail::read_input(cfg.input, in));
  } catch (const UsageError&) {
    throw;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
  StatsReport report = phenomenon_stats(rows);
  detail::Sink sink(cfg.output, out);
  if (cfg.emit == "json") sink.stream() << to_json(report).dump(2) << '\n';
  else write_text(sink.stream(), report);
  sink.commit();
  return kOk;
}

inline int run_validate(const InvocationConfig& cfg, std::istream& in, std::ostream& out,
                        std::ostream&) {
  const Dialect dialect = detail::dialect_or_throw(cfg.dialect);
  std::string text = detail::read_input(cfg.input, in);
  std::size_t sentences = 0, problems = 0;
  detail::Sink sink(cfg.output, out);
  for (const ParsedSentence& ps : parse_conll_blocks(text, dialect, Validation::deferred)) {
    ++sentences;
    if (!ps.tree) {
      ++problems;
      sink.stream() << ps.sentence_id << "\tparse-error\t" << ps.error << '\n';
      continue;
    }
    for (const Diagnostic& d : validate(*ps.tree)) {
      ++problems;
      sink.stream() << ps.sentence_id << '\t' << to_string(d.violation) << '\t' << d.message << '\n';
    }
  }
  sink.stream() << sentences << " sentences, " << problems << " errors\n";
  sink.commit();
  return problems == 0 ? kOk : kDataError;
}

/// Entry point shared by the binary and the tests. `args` excludes argv[0].
inline int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
               std::ostream& err) {
  CLI::App app{"Rule-based open relation extraction over parsed Chinese text", "cnore"};
  app.require_subcommand(1, 1);
  InvocationConfig cfg;

  auto add_input = [&](CLI::App* sub) {
    sub->add_option("--input", cfg.input, "Input path (default: standard input)");
    sub->add_option("--output", cfg.output, "Output path (default: standard output)");
  };
  auto add_dialect = [&](CLI::App* sub) {
    sub->add_option("--dialect", cfg.dialect, "CoNLL dialect")
        ->check(CLI::IsMember({"conllx", "conllu"}));
  };
  auto add_emit = [&](CLI::App* sub, const char* help) {
    sub->add_option("--emit", cfg.emit, help)->check(CLI::IsMember({"tsv", "json"}));
  };

  CLI::App* extract = app.add_subcommand("extract", "Extract relation triples from parsed sentences");
  add_input(extract);
  add_dialect(extract);
  add_emit(extract, "Triple format: tsv or JSON lines");
  extract->add_option("--rules", cfg.rules, "Rule configuration file");
  extract->add_flag("--trace", cfg.trace, "Explain each predicate on the error stream");
  extract->add_option("--jobs", cfg.jobs, "Worker shards (0: one per core)");

  CLI::App* eval = app.add_subcommand("eval", "Score predicted triples against gold triples");
  add_input(eval);
  eval->add_option("--gold", cfg.gold, "Gold triple file")->required();
  eval->add_option("--match", cfg.match, "Match policy")
      ->check(CLI::IsMember({"exact", "head-only"}));
  add_emit(eval, "Report format: tsv (aligned text) or json");

  CLI::App* stats = app.add_subcommand("stats", "Phenomenon frequency report for a triple file");
  add_input(stats);
  add_emit(stats, "Report format: tsv (aligned text) or json");

  CLI::App* validate_cmd = app.add_subcommand("validate", "Check dependency-tree invariants");
  add_input(validate_cmd);
  add_dialect(validate_cmd);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsageError;
  }

  try {
    if (extract->parsed()) return run_extract(cfg, in, out, err);
    if (eval->parsed()) return run_eval(cfg, in, out, err);
    if (stats->parsed()) return run_stats(cfg, in, out, err);
    return run_validate(cfg, in, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
}

}  // namespace cnore::cli
