#include <gtest/gtest.h>

#include <vector>

#include "cnore/rules.hpp"
#include "support/trees.hpp"

namespace cnore {
namespace {

using testing::find_tree;
using testing::index_of;
using testing::make_tree;

class RulesTest : public ::testing::Test {
 protected:
  std::vector<DepTree> corpus = testing::paper_corpus();
  RuleConfig cfg;

  const DepTree& tree(const std::string& id) { return find_tree(corpus, id); }
};

TEST_F(RulesTest, FindPredicates) {
  const DepTree& jordan = tree("jordan");
  EXPECT_EQ(find_predicates(jordan, cfg),
            (std::vector<TokenIndex>{index_of(jordan, "是"), index_of(jordan, "出生")}));
  const DepTree& hassan = tree("hassan");
  EXPECT_EQ(find_predicates(hassan, cfg), (std::vector<TokenIndex>{index_of(hassan, "离开了")}));
  auto nouns = make_tree("n", {{"外交", "n", 2, "ATT"}, {"关系", "n", 0, "HED"}});
  EXPECT_TRUE(find_predicates(nouns, cfg).empty());
}

TEST_F(RulesTest, MatchSvo) {
  const DepTree& hassan = tree("hassan");
  auto m = match_svo(hassan, index_of(hassan, "离开了"), cfg);
  ASSERT_TRUE(m);
  EXPECT_EQ(m->phenomenon, Phenomenon::SVO);
  EXPECT_EQ(m->subject, index_of(hassan, "海森"));
  EXPECT_EQ(m->direct_object, index_of(hassan, "夏威夷"));

  const DepTree& jordan = tree("jordan");
  auto j = match_svo(jordan, index_of(jordan, "是"), cfg);
  ASSERT_TRUE(j);
  EXPECT_EQ(j->subject, index_of(jordan, "乔丹"));
  EXPECT_EQ(j->direct_object, index_of(jordan, "运动员"));

  auto intransitive = make_tree("i", {{"哈德森", "nh", 2, "SBV"}, {"出生", "v", 0, "HED"}});
  EXPECT_FALSE(match_svo(intransitive, 2, cfg));
}

TEST_F(RulesTest, MatchSvoPrefersNearestThenLeftmost) {
  // objects at distance 1 on both sides of verb 3, subjects at distance 2
  auto t = make_tree("near", {{"甲", "n", 3, "SBV"}, {"乙", "n", 3, "VOB"}, {"做", "v", 0, "HED"},
                              {"丙", "n", 3, "VOB"}, {"丁", "n", 3, "SBV"}});
  auto m = match_svo(t, 3, cfg);
  ASSERT_TRUE(m);
  EXPECT_EQ(m->direct_object, 2);
  EXPECT_EQ(m->subject, 1);  // distance 2 on both sides, leftmost wins
}

TEST_F(RulesTest, MatchClvcPanamaExcludesTemporalPrepObject) {
  const DepTree& t = tree("panama");
  auto matches = match_clvc(t, index_of(t, "建立"), cfg);
  ASSERT_EQ(matches.size(), 1u);
  EXPECT_EQ(matches[0].phenomenon, Phenomenon::CLVC);
  EXPECT_EQ(matches[0].direct_object, index_of(t, "关系"));
  EXPECT_EQ(matches[0].preposition, index_of(t, "与"));
  EXPECT_EQ(matches[0].prep_object, index_of(t, "中国"));
}

TEST_F(RulesTest, MatchClvcFaust) {
  const DepTree& t = tree("faust");
  auto matches = match_clvc(t, index_of(t, "达成"), cfg);
  ASSERT_EQ(matches.size(), 1u);
  EXPECT_EQ(matches[0].phenomenon, Phenomenon::CLVC);
  EXPECT_EQ(matches[0].direct_object, index_of(t, "协议"));
  EXPECT_EQ(matches[0].preposition, index_of(t, "与"));
  EXPECT_EQ(matches[0].prep_object, index_of(t, "魔鬼"));
}

TEST_F(RulesTest, MatchClvcExtendedForNotionalVerb) {
  const DepTree& t = tree("xijinping");
  auto matches = match_clvc(t, index_of(t, "看望"), cfg);
  ASSERT_EQ(matches.size(), 1u);
  EXPECT_EQ(matches[0].phenomenon, Phenomenon::EXTENDED_CLVC);
  EXPECT_EQ(matches[0].direct_object, index_of(t, "师生"));
  EXPECT_EQ(matches[0].preposition, index_of(t, "在"));
  EXPECT_EQ(matches[0].prep_object, index_of(t, "北京八一学校"));
}

TEST_F(RulesTest, LightVerbLexiconOnlyChangesTheTag) {
  RuleConfig extended = cfg;
  extended.light_verbs.insert("看望");
  const DepTree& t = tree("xijinping");
  auto a = match_clvc(t, index_of(t, "看望"), cfg);
  auto b = match_clvc(t, index_of(t, "看望"), extended);
  ASSERT_EQ(a.size(), b.size());
  EXPECT_EQ(b[0].phenomenon, Phenomenon::CLVC);
  b[0].phenomenon = a[0].phenomenon;
  EXPECT_EQ(a, b);
}

TEST_F(RulesTest, MatchIvBothSides) {
  const DepTree& a = tree("hudson-a");
  const DepTree& b = tree("hudson-b");
  auto ma = match_iv(a, index_of(a, "出生"), cfg);
  auto mb = match_iv(b, index_of(b, "出生"), cfg);
  ASSERT_EQ(ma.size(), 1u);
  ASSERT_EQ(mb.size(), 1u);
  EXPECT_EQ(ma[0].phenomenon, Phenomenon::IV_RIGHT);
  EXPECT_EQ(mb[0].phenomenon, Phenomenon::IV_LEFT);
  EXPECT_FALSE(ma[0].direct_object);
  EXPECT_FALSE(mb[0].direct_object);
  // identical forms, only the tag differs
  auto forms = [](const DepTree& t, const PatternMatch& m) {
    return std::tuple(t.at(m.predicate).form, t.at(*m.preposition).form, t.at(*m.prep_object).form);
  };
  EXPECT_EQ(forms(a, ma[0]), forms(b, mb[0]));
  EXPECT_EQ(std::get<2>(forms(a, ma[0])), "汉普斯特德");
}

TEST_F(RulesTest, MatchIvRequiresNoNominalObject) {
  auto t = make_tree("tv", {{"他", "r", 3, "SBV"}, {"在", "p", 3, "ADV"}, {"看望", "v", 0, "HED"},
                            {"师生", "n", 3, "VOB"}, {"学校", "n", 2, "POB"}});
  EXPECT_TRUE(match_iv(t, 3, cfg).empty());
  EXPECT_EQ(match_clvc(t, 3, cfg).size(), 1u);
}

TEST_F(RulesTest, MatchIvWithSharedPrepositionalLabel) {
  RuleConfig shared = cfg;
  shared.labels.prep_complement = shared.labels.prep_adverbial;
  auto t = make_tree("s", {{"哈德森", "nh", 2, "SBV"}, {"出生", "v", 0, "HED"}, {"在", "p", 2, "ADV"},
                           {"伦敦", "ns", 3, "POB"}});
  auto m = match_iv(t, 2, shared);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0].phenomenon, Phenomenon::IV_RIGHT);
}

TEST_F(RulesTest, ClvcAndIvAreMutuallyExclusiveOnFixtures) {
  for (const DepTree& t : corpus) {
    for (TokenIndex p : find_predicates(t, cfg)) {
      EXPECT_FALSE(!match_clvc(t, p, cfg).empty() && !match_iv(t, p, cfg).empty())
          << t.sentence_id() << " " << p;
    }
  }
}

TEST_F(RulesTest, DetectNmc) {
  const DepTree& obama = tree("obama");
  EXPECT_EQ(detect_nmc(obama, index_of(obama, "总统"), cfg),
            (PseudoEntity{index_of(obama, "总统"), index_of(obama, "奥巴马")}));
  EXPECT_FALSE(detect_nmc(obama, index_of(obama, "奥巴马"), cfg));
  EXPECT_FALSE(detect_nmc(obama, index_of(obama, "中国"), cfg));

  auto police = make_tree("p", {{"华盛顿", "ns", 2, "ATT"}, {"警方", "n", 3, "SBV"},
                                {"逮捕", "v", 0, "HED"}, {"嫌犯", "n", 3, "VOB"}});
  EXPECT_EQ(detect_nmc(police, 2, cfg), (PseudoEntity{2, 1}));

  // the nearest entity modifier wins
  auto two = make_tree("two", {{"中国", "ns", 3, "ATT"}, {"北京", "ns", 3, "ATT"}, {"市长", "n", 0, "HED"}});
  EXPECT_EQ(detect_nmc(two, 3, cfg), (PseudoEntity{3, 2}));

  // a non-entity attribute is not a pseudo-entity trigger
  auto plain = make_tree("plain", {{"外交", "n", 2, "ATT"}, {"关系", "n", 0, "HED"}});
  EXPECT_FALSE(detect_nmc(plain, 2, cfg));
}

TEST_F(RulesTest, ResolveSubject) {
  const DepTree& jordan = tree("jordan");
  EXPECT_EQ(resolve_subject(jordan, index_of(jordan, "出生"), cfg), index_of(jordan, "乔丹"));
  const DepTree& hassan = tree("hassan");
  EXPECT_EQ(resolve_subject(hassan, index_of(hassan, "离开了"), cfg), index_of(hassan, "海森"));
  auto imperative = make_tree("imp", {{"离开", "v", 0, "HED"}, {"这里", "r", 1, "VOB"}});
  EXPECT_FALSE(resolve_subject(imperative, 1, cfg));
}

TEST_F(RulesTest, ResolveSubjectWalksLongCoordinationChains) {
  auto t = make_tree("chain", {{"他", "r", 2, "SBV"}, {"来", "v", 0, "HED"}, {"看", "v", 2, "COO"},
                               {"走", "v", 3, "COO"}});
  EXPECT_EQ(resolve_subject(t, 4, cfg), 1);
  // the walk stops at non-coordination edges
  auto adv = make_tree("adv", {{"他", "r", 2, "SBV"}, {"来", "v", 0, "HED"}, {"看", "v", 2, "VOB"}});
  EXPECT_FALSE(resolve_subject(adv, 3, cfg));
}

TEST_F(RulesTest, NonVerbalPredicateMatchesNothing) {
  const DepTree& t = tree("panama");
  EXPECT_TRUE(match_clvc(t, index_of(t, "关系"), cfg).empty());
  EXPECT_TRUE(match_iv(t, index_of(t, "关系"), cfg).empty());
  EXPECT_FALSE(match_svo(t, index_of(t, "关系"), cfg));
}

}  // namespace
}  // namespace cnore
