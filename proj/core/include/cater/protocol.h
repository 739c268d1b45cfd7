#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cater/category.h"
#include "cater/scoring.h"
#include "cater/text_metrics.h"

namespace cater {

inline constexpr char kDefaultTemplateId[] = "cater-v1";

struct EvaluationRequest {
  std::string source_text;
  std::string translation_text;
  WeightProfile weight_profile;
  WordCountPolicy word_count_policy = WordCountPolicy::UnicodeWords();
  std::string prompt_template_id = kDefaultTemplateId;
  std::optional<std::string> domain_notes;
  RatingBands rating_bands;

  friend bool operator==(const EvaluationRequest&, const EvaluationRequest&) = default;
};

// Throws InvalidRequestError for empty texts or an unknown template id.
void ValidateRequest(const EvaluationRequest& request);

// Identifiers accepted in EvaluationRequest::prompt_template_id.
std::vector<std::string> PromptTemplateIds();

// Renders the evaluation prompt: the five-dimension task description, both
// texts, the weight table, the scoring formulas and the JSON response schema.
std::string BuildPrompt(const EvaluationRequest& request);

// Follow-up prompt used when a response could not be parsed.
std::string BuildReaskPrompt(const std::string& original_prompt,
                             const std::string& diagnostic);

struct ErrorRecord {
  Category category = Category::kLinguisticAccuracy;
  std::string location;
  std::string explanation;
  std::string suggested_correction;
  std::int64_t words_to_correct = 0;

  friend bool operator==(const ErrorRecord&, const ErrorRecord&) = default;
};

// Per-category figures the model computed itself. Audit only.
struct SelfReport {
  std::optional<EditRatio> er_percent;
  std::optional<int> score;

  friend bool operator==(const SelfReport&, const SelfReport&) = default;
};

struct ParsedEvaluation {
  std::vector<ErrorRecord> errors;
  std::map<Category, SelfReport> self_reported;
  std::string raw_response;
  // More than one JSON object was present; only the first was used.
  bool extra_objects_ignored = false;

  // Sum of words_to_correct and number of errors for every category; categories
  // without errors are present with zero tallies.
  std::map<Category, CategoryTally> Tally() const;

  // Compares the parsed content; raw_response and flags are ignored.
  friend bool operator==(const ParsedEvaluation& a, const ParsedEvaluation& b) {
    return a.errors == b.errors && a.self_reported == b.self_reported;
  }
};

// Extracts the first balanced JSON object from raw (prose and code fences
// around it are ignored) and validates it against the response schema:
//
//   {"errors": [{"category": "LA"|"SA"|"CF"|"STA"|"IC",
//                "location": string (non-empty),
//                "explanation": string,
//                "suggested_correction": string,
//                "words_to_correct": integer >= 0}, ...],
//    "summaries": {"<category>": {"er_percent": number, "score": integer}}}
//
// "summaries" and each of its fields are optional. Unknown keys are rejected.
// Throws NoJsonFoundError or SchemaViolationError.
ParsedEvaluation ParseResponse(const std::string& raw);

// Canonical wire form of a ParsedEvaluation (the schema above). Parsing the
// output yields an equal value.
std::string SerializeEvaluation(const ParsedEvaluation& parsed);

struct Discrepancy {
  enum class Field { kErPercent, kScore };

  Category category = Category::kLinguisticAccuracy;
  Field field = Field::kScore;
  double self_reported = 0;
  double locally_computed = 0;

  friend bool operator==(const Discrepancy&, const Discrepancy&) = default;
};

std::string_view FieldName(Discrepancy::Field field);

struct ReconcileResult {
  ScoreReport report;
  std::vector<Discrepancy> discrepancies;
  // Indices into parsed.errors whose location was not found in the translation.
  std::vector<std::size_t> unlocated_errors;
};

// Recomputes every score locally from the reported words-to-correct counts.
// Self-reported values never influence the report; mismatches are returned as
// discrepancies. Throws InvalidRequestError when the source word count is
// zero.
ReconcileResult Reconcile(const ParsedEvaluation& parsed,
                          const EvaluationRequest& request);

}  // namespace cater
