#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cnore/cli.hpp"
#include "support/trees.hpp"

namespace cnore {
namespace {

using testing::fixture_path;

struct Run {
  int status;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args, const std::string& stdin_text = "") {
  std::istringstream in(stdin_text);
  std::ostringstream out, err;
  int status = cli::run(args, in, out, err);
  return {status, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& content) {
  auto path = std::filesystem::temp_directory_path() / ("cnore_cli_test_" + name);
  std::ofstream(path, std::ios::binary) << content;
  return path.string();
}

const std::string kCorpus = fixture_path("paper_corpus.conllu");
const std::string kGold = fixture_path("paper_gold.tsv");

TEST(CliExtract, FixtureCorpus) {
  auto r = run({"extract", "--input", kCorpus});
  EXPECT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 9);
  EXPECT_EQ(r.err, "");
  EXPECT_EQ(r.out, testing::read_fixture("paper_gold.tsv"));
}

TEST(CliExtract, EmptyInput) {
  auto r = run({"extract"}, "");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "");
}

TEST(CliExtract, UnknownFlagIsUsageError) {
  auto r = run({"extract", "--bogus"});
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("Usage"), std::string::npos) << r.err;
  EXPECT_EQ(r.out, "");
  EXPECT_EQ(run({}).status, 2);
  EXPECT_EQ(run({"frobnicate"}).status, 2);
  // flags belong to their subcommand
  EXPECT_EQ(run({"stats", "--trace"}).status, 2);
  EXPECT_EQ(run({"extract", "--gold", kGold}).status, 2);
}

TEST(CliExtract, UnreadableInputAndBadRules) {
  EXPECT_EQ(run({"extract", "--input", "/nonexistent/x.conllu"}).status, 2);
  auto rules = temp_file("bad.rules", "colour = red\n");
  auto r = run({"extract", "--input", kCorpus, "--rules", rules});
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("unknown key"), std::string::npos);
  EXPECT_EQ(r.out, "");
}

TEST(CliExtract, RulesFileRetargetsLabels) {
  // same Hassan tree under a different subject label
  const std::string conll =
      "1\t海森\t_\tnh\tnh\t_\t3\tnsubj\t_\t_\n"
      "2\t上周\t_\tnt\tnt\t_\t3\tADV\t_\t_\n"
      "3\t离开了\t_\tv\tv\t_\t0\tHED\t_\t_\n"
      "4\t夏威夷\t_\tns\tns\t_\t3\tVOB\t_\t_\n";
  EXPECT_EQ(run({"extract", "--dialect", "conllx"}, conll).out, "");
  auto rules = temp_file("ud.rules", "subject = nsubj\n");
  EXPECT_EQ(run({"extract", "--dialect", "conllx", "--rules", rules}, conll).out,
            "1\t海森\t离开了\t夏威夷\tSVO\n");
}

TEST(CliExtract, InvalidSentenceExitsOneButKeepsOthers) {
  std::string text = testing::read_fixture("paper_corpus.conllu") +
                     "# sent_id = twin\n1\t甲\t_\tv\tv\t_\t0\tHED\t_\t_\n2\t乙\t_\tv\tv\t_\t0\tHED\t_\t_\n\n" +
                     "# sent_id = cols\n1\t甲\t_\tv\n\n";
  auto r = run({"extract"}, text);
  EXPECT_EQ(r.status, 1);
  EXPECT_EQ(r.out, testing::read_fixture("paper_gold.tsv"));
  EXPECT_NE(r.err.find("twin"), std::string::npos);
  EXPECT_NE(r.err.find("cols"), std::string::npos);
}

TEST(CliExtract, JsonAndTraceAndOutputFile) {
  auto out_path = temp_file("out.jsonl", "");
  auto r = run({"extract", "--input", kCorpus, "--emit", "json", "--trace", "--output", out_path});
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "");
  std::ifstream f(out_path);
  std::string line;
  int n = 0;
  while (std::getline(f, line)) {
    auto j = nlohmann::json::parse(line);
    EXPECT_TRUE(j.contains("arg1_indices"));
    ++n;
  }
  EXPECT_EQ(n, 9);
  // one trace line per predicate: hassan 1, obama 1, panama 1, faust 1, xi 1,
  // hudson 1 + 1, jordan 2
  std::istringstream err(r.err);
  int traces = 0;
  while (std::getline(err, line)) traces += line.rfind("trace\t", 0) == 0;
  EXPECT_EQ(traces, 9);
}

TEST(CliExtract, ConllxDialect) {
  auto trees = testing::paper_corpus();
  auto r = run({"extract", "--dialect", "conllx"}, serialize_conll(trees, Dialect::conllx));
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 9);
  EXPECT_EQ(r.out.substr(0, 2), "1\t");
}

TEST(CliEval, PerfectFixtureRun) {
  auto pred = run({"extract", "--input", kCorpus}).out;
  auto r = run({"eval", "--gold", kGold}, pred);
  EXPECT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "precision 1.0000 recall 1.0000 f1 1.0000");

  auto j = run({"eval", "--gold", kGold, "--emit", "json"}, pred);
  auto parsed = nlohmann::json::parse(j.out);
  EXPECT_EQ(parsed["f1"], 1.0);
  EXPECT_EQ(parsed["per_phenomenon"]["IV_RIGHT"]["gold"], 2);
}

TEST(CliEval, ErrorsAndEmptyPredictions) {
  EXPECT_EQ(run({"eval", "--gold", "/nonexistent/gold.tsv"}, "").status, 2);
  EXPECT_EQ(run({"eval"}, "").status, 2);
  auto zero = run({"eval", "--gold", kGold}, "");
  EXPECT_EQ(zero.status, 0);
  EXPECT_EQ(zero.out.substr(0, zero.out.find('\n')), "precision 0.0000 recall 0.0000 f1 0.0000");
  auto bad = run({"eval", "--gold", kGold}, "x\ty\n");
  EXPECT_EQ(bad.status, 1);
  EXPECT_NE(bad.err.find("line 1"), std::string::npos);
  auto bad_gold = temp_file("bad_gold.tsv", "a\tb\tc\td\tSVO\nbroken\n");
  auto bg = run({"eval", "--gold", bad_gold}, "");
  EXPECT_EQ(bg.status, 1);
  EXPECT_NE(bg.err.find("line 2"), std::string::npos);
}

TEST(CliEval, HeadOnlyPolicy) {
  auto gold = temp_file("head_gold.tsv", "s\t乔丹\t是\t美国 职业 篮球 运动员\tSVO\n");
  auto r = run({"eval", "--gold", gold, "--match", "head-only"}, "s\t乔丹\t是\t运动员\tSVO\n");
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "precision 1.0000 recall 1.0000 f1 1.0000");
  EXPECT_EQ(run({"eval", "--gold", gold, "--match", "fuzzy"}, "").status, 2);
}

TEST(CliStats, ConstructedMultiset) {
  auto r = run({"stats", "--input", fixture_path("stats_118.tsv")});
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("40.68"), std::string::npos);
  EXPECT_NE(r.out.find("14.41"), std::string::npos);
  EXPECT_NE(r.out.find(" 8.47"), std::string::npos);
  EXPECT_NE(r.out.find("63.56"), std::string::npos);
}

TEST(CliStats, PipelineComposability) {
  auto tsv = run({"extract", "--input", kCorpus}).out;
  auto jsonl = run({"extract", "--input", kCorpus, "--emit", "json"}).out;
  auto path = temp_file("pipe.tsv", tsv);
  auto piped = run({"stats"}, tsv);
  auto from_file = run({"stats", "--input", path});
  auto from_json = run({"stats"}, jsonl);
  EXPECT_EQ(piped.out, from_file.out);
  EXPECT_EQ(piped.out, from_json.out);
  EXPECT_NE(piped.out.find("NMC                 2"), std::string::npos) << piped.out;
  EXPECT_EQ(run({"stats"}, "broken\n").status, 1);
}

TEST(CliValidate, FixtureAndMutations) {
  auto ok = run({"validate", "--input", kCorpus});
  EXPECT_EQ(ok.status, 0);
  EXPECT_EQ(ok.out, "8 sentences, 0 errors\n");

  auto cyc = run({"validate"},
                 "# sent_id = loop\n"
                 "1\t甲\t_\tn\tn\t_\t2\tATT\t_\t_\n"
                 "2\t乙\t_\tn\tn\t_\t3\tATT\t_\t_\n"
                 "3\t丙\t_\tn\tn\t_\t1\tATT\t_\t_\n"
                 "4\t丁\t_\tv\tv\t_\t0\tHED\t_\t_\n");
  EXPECT_NE(cyc.status, 0);
  EXPECT_NE(cyc.out.find("loop\tcycle"), std::string::npos) << cyc.out;
  EXPECT_NE(cyc.out.find("1 sentences, 1 errors"), std::string::npos);
}

TEST(Cli, Idempotent) {
  auto a = run({"extract", "--input", kCorpus, "--emit", "json"});
  auto b = run({"extract", "--input", kCorpus, "--emit", "json", "--jobs", "4"});
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(run({"validate", "--input", kCorpus}).out, run({"validate", "--input", kCorpus}).out);
}

TEST(Cli, HelpExitsZero) {
  auto r = run({"--help"});
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("extract"), std::string::npos);
}

}  // namespace
}  // namespace cnore
