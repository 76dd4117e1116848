#include <gtest/gtest.h>

#include "support.hpp"

using namespace asags;
using testing_support::text;

namespace {

const Resources kNoResources{};

std::vector<std::pair<std::size_t, std::size_t>> pairs_of(const Alignment& a) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (const auto& p : a.pairs) out.emplace_back(p.student.begin, p.reference.begin);
    return out;
}

}  // namespace

TEST(Stages, ParseAndFormat) {
    const auto s = parse_stages(" Exact , STEM, heuristic( numeric ,synonym ) ");
    ASSERT_EQ(s.size(), 3u);
    EXPECT_EQ(s[2].rules, (std::vector<HeuristicRule>{HeuristicRule::numeric, HeuristicRule::synonym}));
    EXPECT_EQ(format_stages(s), "exact,stem,heuristic(numeric,synonym)");
    EXPECT_EQ(format_stages(parse_stages("heuristics")),
              "heuristic(synonym,numeric,acronym,derivational,gazetteer)");
    EXPECT_EQ(parse_stages(format_stages(s)).size(), 3u);
}

TEST(Stages, RejectsBadLists) {
    EXPECT_THROW(parse_stages(""), InputError);
    EXPECT_THROW(parse_stages("exact,exact"), InputError);
    EXPECT_THROW(parse_stages("exact,fuzzy"), InputError);
    EXPECT_THROW(parse_stages("heuristic(synonym,synonym)"), InputError);
    EXPECT_THROW(parse_stages("heuristic(colour)"), InputError);
    EXPECT_THROW(parse_stages("heuristic(synonym"), InputError);
    EXPECT_THROW(parse_stages("exact(synonym)"), InputError);
}

TEST(Align, IdentityExact) {
    const auto a = align(text("a b"), text("a b"), {MatcherStage::exact()}, kNoResources);
    EXPECT_EQ(pairs_of(a), (std::vector<std::pair<std::size_t, std::size_t>>{{0, 0}, {1, 1}}));
    EXPECT_EQ(a.chunk_count, 1u);
}

TEST(Align, StemAfterExact) {
    const auto s = text("cats"), r = text("cat");
    EXPECT_TRUE(align(s, r, {MatcherStage::exact()}, kNoResources).pairs.empty());
    const auto a = align(s, r, {MatcherStage::exact(), MatcherStage::stem()}, kNoResources);
    ASSERT_EQ(a.pairs.size(), 1u);
    EXPECT_EQ(a.pairs[0].stage, StageKind::stem);
}

TEST(Align, AcronymSpansReference) {
    const auto a = align(text("NLP"), text("natural language processing"),
                         {MatcherStage::heuristic({HeuristicRule::acronym})}, kNoResources);
    ASSERT_EQ(a.pairs.size(), 1u);
    EXPECT_EQ(a.pairs[0].reference.begin, 0u);
    EXPECT_EQ(a.pairs[0].reference.length, 3u);
    EXPECT_EQ(a.pairs[0].rule, HeuristicRule::acronym);
    EXPECT_EQ(a.matched_student_count(), 1u);
    EXPECT_EQ(a.matched_reference_count(), 3u);
}

TEST(Align, AcronymSpansStudent) {
    const auto a = align(text("open systems interconnection model"), text("OSI model"),
                         {MatcherStage::exact(), MatcherStage::heuristic()}, kNoResources);
    EXPECT_EQ(a.matched_student_count(), 4u);
    EXPECT_EQ(a.matched_reference_count(), 2u);
    EXPECT_EQ(a.chunk_count, 1u);
}

TEST(Align, ChunksCountInOrderRuns) {
    const auto a = align(text("c a b"), text("a b c"), {MatcherStage::exact()}, kNoResources);
    EXPECT_EQ(a.pairs.size(), 3u);
    EXPECT_EQ(a.chunk_count, 2u);
}

TEST(Align, DisjointGivesNothing) {
    const auto a = align(text("x y z"), text("p q r"), default_stages(), kNoResources);
    EXPECT_TRUE(a.pairs.empty());
    EXPECT_EQ(a.chunk_count, 0u);
}

TEST(Align, LeftmostReferenceWins) {
    const auto a = align(text("a"), text("b a a"), {MatcherStage::exact()}, kNoResources);
    EXPECT_EQ(pairs_of(a), (std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}}));
}

TEST(Align, HeuristicRulesUseBundledLexicons) {
    const auto& res = testing_support::bundled_resources();
    const StageList h{MatcherStage::heuristic()};
    auto rule_of = [&](const char* s, const char* r) -> std::optional<HeuristicRule> {
        const auto a = align(text(s), text(r), h, res);
        if (a.pairs.empty()) return std::nullopt;
        return a.pairs[0].rule;
    };
    EXPECT_EQ(rule_of("supply", "provide"), HeuristicRule::synonym);
    EXPECT_EQ(rule_of("7th", "seventh"), HeuristicRule::numeric);
    EXPECT_EQ(rule_of("removal", "remove"), HeuristicRule::derivational);
    EXPECT_EQ(rule_of("madras", "chennai"), HeuristicRule::gazetteer);
    EXPECT_EQ(rule_of("banana", "apple"), std::nullopt);
}

TEST(Align, RuleOrderDecidesTheCredit) {
    // "deletion" -> root "delete", a synonym of "remove"; only the
    // derivational rule bridges them.
    const auto& res = testing_support::bundled_resources();
    const auto a = align(text("deletion"), text("remove"), {MatcherStage::heuristic()}, res);
    ASSERT_EQ(a.pairs.size(), 1u);
    EXPECT_EQ(a.pairs[0].rule, HeuristicRule::derivational);
    const auto none = align(text("deletion"), text("remove"), {MatcherStage::heuristic({HeuristicRule::synonym})}, res);
    EXPECT_TRUE(none.pairs.empty());
}

TEST(Align, StagesOnlyAdd) {
    const auto& res = testing_support::bundled_resources();
    const auto s = text("the 7th layer pushes items"), r = text("seventh layer push elements");
    const auto e = align(s, r, {MatcherStage::exact()}, res);
    const auto es = align(s, r, {MatcherStage::exact(), MatcherStage::stem()}, res);
    const auto esh = align(s, r, default_stages(), res);
    EXPECT_LE(e.matched_student_count(), es.matched_student_count());
    EXPECT_LE(es.matched_student_count(), esh.matched_student_count());
    EXPECT_EQ(esh.matched_student_count(), 4u);
    for (const auto& p : e.pairs) EXPECT_NE(std::find(esh.pairs.begin(), esh.pairs.end(), p), esh.pairs.end());
}

TEST(Align, RejectsInvalidStages) {
    EXPECT_THROW(align(text("a"), text("a"), {}, kNoResources), InputError);
}
