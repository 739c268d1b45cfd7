#include "cater/serialization.h"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "cater/error.h"

namespace cater {
namespace {

using Json = nlohmann::json;

TEST(ReportJsonTest, SchemaAndValues) {
  EvaluationRequest req;
  req.source_text = "s";
  req.translation_text = "t";
  req.word_count_policy = WordCountPolicy::Explicit(100);
  ParsedEvaluation p = ParseResponse(
      R"({"errors": [{"category": "SA", "location": "t", "explanation": "e",
      "suggested_correction": "c", "words_to_correct": 6}],
      "summaries": {"SA": {"score": 80}}})");
  const ReconcileResult res = Reconcile(p, req);
  const Json j = Json::parse(ReportToJson(res.report, res.discrepancies));

  EXPECT_EQ(j["source_word_count"], 100);
  EXPECT_EQ(j["weight_profile"]["SA"], 4);
  ASSERT_EQ(j["categories"].size(), 5u);
  EXPECT_EQ(j["categories"][1]["category"], "SA");
  EXPECT_EQ(j["categories"][1]["error_count"], 1);
  EXPECT_EQ(j["categories"][1]["words_to_correct"], 6);
  EXPECT_DOUBLE_EQ(j["categories"][1]["er_percent"].get<double>(), 6.0);
  EXPECT_EQ(j["categories"][1]["score"], 76);
  EXPECT_EQ(j["overall_score"], 76);
  EXPECT_DOUBLE_EQ(j["overall_er_percent"].get<double>(), 6.0);
  EXPECT_EQ(j["rating"], "Good");
  ASSERT_EQ(j["discrepancies"].size(), 1u);
  EXPECT_EQ(j["discrepancies"][0]["field"], "score");
  EXPECT_EQ(j["discrepancies"][0]["self_reported"], 80);
  EXPECT_EQ(j["discrepancies"][0]["locally_computed"], 76);
}

TEST(ReportJsonTest, OneDecimalFormatting) {
  std::map<Category, std::int64_t> counts;
  for (Category c : kAllCategories) counts[c] = 7;
  const std::string text =
      ReportToJson(AssembleReport(counts, 30, WeightProfile::Default()), {});
  EXPECT_NE(text.find("\"er_percent\": 23.3"), std::string::npos);
  EXPECT_NE(text.find("\"overall_er_percent\": 116.5"), std::string::npos);
}

TEST(WeightsJsonTest, Overrides) {
  const WeightProfile w =
      ApplyWeightOverrides(WeightProfile::Default(), R"({"SA": 1, "IC": "0.25", "LA": 0.5})");
  EXPECT_EQ(w[Category::kSemanticAccuracy], Weight::FromInteger(1));
  EXPECT_EQ(w[Category::kInformationCompleteness], Weight::FromString("0.25"));
  EXPECT_EQ(w[Category::kLinguisticAccuracy], Weight::FromString("0.5"));
  EXPECT_EQ(w[Category::kContextualFit], Weight::FromInteger(3));
  EXPECT_EQ(ApplyWeightOverrides(WeightProfile(), WeightsToJson(w)), w);
  EXPECT_NE(WeightsToJson(w).find("\"LA\": 0.5"), std::string::npos);

  EXPECT_THROW(ApplyWeightOverrides(w, R"({"XX": 1})"), InvalidInputError);
  EXPECT_THROW(ApplyWeightOverrides(w, R"({"SA": -1})"), InvalidInputError);
  EXPECT_THROW(ApplyWeightOverrides(w, R"({"SA": true})"), InvalidInputError);
  EXPECT_THROW(ApplyWeightOverrides(w, R"([1])"), InvalidInputError);
  EXPECT_THROW(ApplyWeightOverrides(w, "{"), InvalidInputError);
}

TEST(RequestJsonTest, RoundTrip) {
  EvaluationRequest req;
  req.source_text = "Let's go, America!";
  req.translation_text = "さあ、行きましょう!";
  req.weight_profile.Set(Category::kStylisticAppropriateness, Weight::FromString("2.5"));
  req.word_count_policy = WordCountPolicy::CjkAware();
  req.domain_notes = "political speech";
  req.rating_bands = RatingBands({{0, "bad"}, {50, "ok"}});
  EXPECT_EQ(RequestFromJson(RequestToJson(req)), req);

  req.domain_notes.reset();
  EXPECT_EQ(RequestFromJson(RequestToJson(req)), req);
  EXPECT_THROW(RequestFromJson(R"({"source_text": "x"})"), InvalidInputError);
}

TEST(RatingBandsJsonTest, RoundTrip) {
  const RatingBands bands;
  EXPECT_EQ(RatingBandsFromJson(RatingBandsToJson(bands)), bands);
  EXPECT_THROW(RatingBandsFromJson(R"([{"min": 5, "label": "x"}])"), InvalidInputError);
  EXPECT_THROW(RatingBandsFromJson(R"([{"min": "0", "label": "x"}])"), InvalidInputError);
}

TEST(MarkdownReportTest, FollowsFinalOutputLayout) {
  EvaluationRequest req;
  req.source_text = "one two three four five";
  req.translation_text = "uno dos | tres";
  ParsedEvaluation p = ParseResponse(
      R"({"errors": [{"category": "IC", "location": "cuatro", "explanation": "omitted",
      "suggested_correction": "uno dos tres cuatro cinco", "words_to_correct": 2}]})");
  const std::string md = RenderMarkdownReport(p, Reconcile(p, req));
  const auto errors = md.find("## Identified Errors");
  const auto summaries = md.find("## Category Summaries");
  const auto overall = md.find("## Overall");
  ASSERT_NE(errors, std::string::npos);
  EXPECT_LT(errors, summaries);
  EXPECT_LT(summaries, overall);
  EXPECT_NE(md.find("No errors detected."), std::string::npos);
  EXPECT_NE(md.find("**Location:** \"cuatro\" _(not found verbatim"), std::string::npos);
  // 2/5 = 40.0%, weight 5 -> 100 - 200 -> 0
  EXPECT_NE(md.find("| Information Completeness (IC) | 1 | 2 | 40.0% | 5 | 0 |"),
            std::string::npos);
  EXPECT_NE(md.find("**Overall Score:** 0/100"), std::string::npos);
  EXPECT_NE(md.find("**Rating:** Unusable"), std::string::npos);
}

}  // namespace
}  // namespace cater
