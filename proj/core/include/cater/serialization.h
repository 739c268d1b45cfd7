#pragma once

#include <span>
#include <string>

#include "cater/protocol.h"
#include "cater/scoring.h"

namespace cater {

// report.json:
//   {source_word_count, weight_profile: {LA, SA, CF, STA, IC},
//    categories: [{category, error_count, words_to_correct, er_percent, score} x5],
//    overall_score, overall_er_percent, rating,
//    discrepancies: [{category, field, self_reported, locally_computed}]}
// Output is a pure function of its inputs (no timestamps), pretty-printed with
// two-space indentation.
std::string ReportToJson(const ScoreReport& report,
                         std::span<const Discrepancy> discrepancies);

// {"LA": 1, "SA": 4, ...}; integral weights are written as integers.
std::string WeightsToJson(const WeightProfile& weights);

// Applies the categories present in a JSON object ({"SA": 2, "IC": "0.5"}) on
// top of base. Values may be numbers or decimal strings. Throws
// InvalidInputError for unknown categories or invalid weights.
WeightProfile ApplyWeightOverrides(const WeightProfile& base,
                                   const std::string& json_object);

// [{"min": 90, "label": "Excellent"}, ...]
std::string RatingBandsToJson(const RatingBands& bands);
RatingBands RatingBandsFromJson(const std::string& json_array);

// request.json. Round-trips exactly.
std::string RequestToJson(const EvaluationRequest& request);
EvaluationRequest RequestFromJson(const std::string& json);

// Human-readable report: per-category error lists, per-category summaries,
// then the overall figures.
std::string RenderMarkdownReport(const ParsedEvaluation& parsed,
                                 const ReconcileResult& result);

}  // namespace cater
