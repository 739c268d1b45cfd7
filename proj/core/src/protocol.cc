#include "cater/protocol.h"

#include <cmath>
#include <set>
#include <string_view>

#include <nlohmann/json.hpp>

#include "cater/error.h"

namespace cater {

namespace {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

// Placeholders are written {{name}}. Substitution is a single pass over the
// template, so placeholder-like text inside the inputs is never expanded.
constexpr std::string_view kCaterV1 = R"(You are an evaluation assistant applying the CATER framework to assess a given translation's quality along five dimensions:

1. Linguistic Accuracy (LA)
2. Semantic Accuracy (SA)
3. Contextual Fit (CF)
4. Stylistic Appropriateness (STA)
5. Information Completeness (IC)

Your Inputs:

- Original Text (source_text):
[BEGIN source_text]
{{source_text}}
[END source_text]

- Translated Text (translation_text):
[BEGIN translation_text]
{{translation_text}}
[END translation_text]

Your Task:

1. For each of the five categories (LA, SA, CF, STA, IC), identify all relevant errors if any.
 - For each error, provide:
 - Location (quote the problematic segment)
 - Error Explanation (why it's an error under that specific category)
 - Suggested Correction
 - Words to Correct (an estimate of how many words must be changed, added, or removed)
 - If no errors are found for a category, state "No errors detected."

2. Summarize each category:
 - Total Errors Detected
 - Words to Correct (sum of all corrections in that category)
 - Types of Errors (e.g., grammatical errors for LA, omissions for IC, etc.)

3. Calculate the Edit Ratio (ER%) for each category:

ER%_category = (Words to Correct_category / Original Word Count) * 100
{{word_count_line}}
Round to one decimal place.

4. Convert each category's ER% into a Category Score (0-100) using these weights:
{{weight_lines}}

For each category:

Score_category = max{0, floor((1 - (ER% / 100 * Weight)) * 100)}

If Words_to_Correct=0, then ER%=0.0%, Score=100.

If ER%>100%, Score=0.

5. Compute the Overall Score:

Overall Score = (LA_Score + SA_Score + CF_Score + STA_Score + IC_Score) - 400

If the result is negative, set Overall Score=0.

If all categories are perfect (100 each), Overall Score=100.

6. Compute Overall ER% as the sum of each category's ER%.
{{domain_notes}}
Final Output:

Respond with exactly one JSON object and no other text. Use this schema:

{
  "errors": [
    {
      "category": "LA" | "SA" | "CF" | "STA" | "IC",
      "location": "<quote of the problematic segment>",
      "explanation": "<why it is an error under that category>",
      "suggested_correction": "<corrected text>",
      "words_to_correct": <integer >= 0>
    }
  ],
  "summaries": {
    "<category>": {"er_percent": <number, one decimal>, "score": <integer 0-100>}
  }
}

List every identified error in "errors". A category with no errors ("No errors detected") simply has no entries; an evaluation with no errors at all uses "errors": []. Give a summary for each of the five categories.
)";

struct Template {
  std::string_view id;
  std::string_view text;
};

constexpr Template kTemplates[] = {{kDefaultTemplateId, kCaterV1}};

const Template* FindTemplate(std::string_view id) {
  for (const Template& t : kTemplates) {
    if (t.id == id) return &t;
  }
  return nullptr;
}

std::string Render(std::string_view tmpl,
                   const std::map<std::string, std::string, std::less<>>& values) {
  std::string out;
  out.reserve(tmpl.size() + 256);
  std::size_t pos = 0;
  while (pos < tmpl.size()) {
    const std::size_t open = tmpl.find("{{", pos);
    if (open == std::string_view::npos) {
      out.append(tmpl.substr(pos));
      break;
    }
    const std::size_t close = tmpl.find("}}", open + 2);
    if (close == std::string_view::npos) {
      throw Error("unterminated placeholder in prompt template");
    }
    const std::string_view name = tmpl.substr(open + 2, close - open - 2);
    auto it = values.find(name);
    if (it == values.end()) {
      throw Error("prompt template references unknown placeholder '" +
                  std::string(name) + "'");
    }
    out.append(tmpl.substr(pos, open - pos));
    out.append(it->second);
    pos = close + 2;
  }
  return out;
}

// Returns the end offset (exclusive) of the balanced object starting at
// raw[begin] == '{', or npos. String literals are skipped so braces inside
// them do not count.
std::size_t MatchObject(const std::string& raw, std::size_t begin) {
  int depth = 0;
  bool in_string = false;
  bool escaped = false;
  for (std::size_t i = begin; i < raw.size(); ++i) {
    const char ch = raw[i];
    if (in_string) {
      if (escaped) {
        escaped = false;
      } else if (ch == '\\') {
        escaped = true;
      } else if (ch == '"') {
        in_string = false;
      }
      continue;
    }
    if (ch == '"') {
      in_string = true;
    } else if (ch == '{') {
      ++depth;
    } else if (ch == '}') {
      if (--depth == 0) return i + 1;
    }
  }
  return std::string::npos;
}

struct FoundObject {
  Json value;
  std::size_t begin = 0;
  std::size_t end = 0;
};

std::optional<FoundObject> FindObject(const std::string& raw, std::size_t from) {
  for (std::size_t pos = raw.find('{', from); pos != std::string::npos;
       pos = raw.find('{', pos + 1)) {
    const std::size_t end = MatchObject(raw, pos);
    if (end == std::string::npos) continue;
    Json value = Json::parse(raw.begin() + static_cast<std::ptrdiff_t>(pos),
                             raw.begin() + static_cast<std::ptrdiff_t>(end),
                             /*cb=*/nullptr, /*allow_exceptions=*/false);
    if (value.is_object()) return FoundObject{std::move(value), pos, end};
  }
  return std::nullopt;
}

class SchemaReader {
 public:
  explicit SchemaReader(std::size_t position) : position_(position) {}

  [[noreturn]] void Fail(const std::string& pointer, const std::string& what) const {
    throw SchemaViolationError(
        "response schema violation at " + (pointer.empty() ? "/" : pointer) +
            ": " + what,
        position_, pointer);
  }

  void RequireObject(const Json& j, const std::string& pointer) const {
    if (!j.is_object()) Fail(pointer, "expected an object");
  }

  void RejectUnknownKeys(const Json& j, const std::string& pointer,
                         std::initializer_list<std::string_view> allowed) const {
    for (const auto& item : j.items()) {
      bool known = false;
      for (std::string_view k : allowed) known = known || item.key() == k;
      if (!known) Fail(pointer + "/" + item.key(), "unexpected field");
    }
  }

  const Json& Field(const Json& j, const std::string& pointer,
                    const std::string& key) const {
    auto it = j.find(key);
    if (it == j.end()) Fail(pointer + "/" + key, "missing required field");
    return *it;
  }

  std::string String(const Json& j, const std::string& pointer) const {
    if (!j.is_string()) Fail(pointer, "expected a string");
    return j.get<std::string>();
  }

  // Integers, or floats with an integral value (6.0).
  std::int64_t Integer(const Json& j, const std::string& pointer) const {
    if (j.is_number_integer()) return j.get<std::int64_t>();
    if (j.is_number_float()) {
      const double d = j.get<double>();
      if (std::isfinite(d) && std::floor(d) == d && std::fabs(d) < 9e15) {
        return static_cast<std::int64_t>(d);
      }
    }
    Fail(pointer, "expected an integer");
  }

  double Number(const Json& j, const std::string& pointer) const {
    if (!j.is_number()) Fail(pointer, "expected a number");
    return j.get<double>();
  }

  Category CategoryOf(const std::string& code, const std::string& pointer) const {
    auto c = ParseCategory(code);
    if (!c) Fail(pointer, "unknown category '" + code + "'");
    return *c;
  }

 private:
  std::size_t position_;
};

ParsedEvaluation FromJson(const Json& root, std::size_t position) {
  const SchemaReader r(position);
  ParsedEvaluation out;
  r.RequireObject(root, "");
  r.RejectUnknownKeys(root, "", {"errors", "summaries"});

  const Json& errors = r.Field(root, "", "errors");
  if (!errors.is_array()) r.Fail("/errors", "expected an array");
  for (std::size_t i = 0; i < errors.size(); ++i) {
    const std::string p = "/errors/" + std::to_string(i);
    const Json& e = errors[i];
    r.RequireObject(e, p);
    r.RejectUnknownKeys(e, p,
                        {"category", "location", "explanation",
                         "suggested_correction", "words_to_correct"});
    ErrorRecord rec;
    rec.category = r.CategoryOf(r.String(r.Field(e, p, "category"), p + "/category"),
                                p + "/category");
    rec.location = r.String(r.Field(e, p, "location"), p + "/location");
    if (rec.location.empty()) r.Fail(p + "/location", "must not be empty");
    rec.explanation = r.String(r.Field(e, p, "explanation"), p + "/explanation");
    rec.suggested_correction = r.String(r.Field(e, p, "suggested_correction"),
                                        p + "/suggested_correction");
    rec.words_to_correct =
        r.Integer(r.Field(e, p, "words_to_correct"), p + "/words_to_correct");
    if (rec.words_to_correct < 0) {
      r.Fail(p + "/words_to_correct", "must be nonnegative");
    }
    out.errors.push_back(std::move(rec));
  }

  if (auto it = root.find("summaries"); it != root.end()) {
    const Json& summaries = *it;
    r.RequireObject(summaries, "/summaries");
    for (const auto& item : summaries.items()) {
      const std::string p = "/summaries/" + item.key();
      const Category c = r.CategoryOf(item.key(), p);
      r.RequireObject(item.value(), p);
      r.RejectUnknownKeys(item.value(), p, {"er_percent", "score"});
      SelfReport self;
      if (auto er = item.value().find("er_percent"); er != item.value().end()) {
        const double v = r.Number(*er, p + "/er_percent");
        if (!(v >= 0)) r.Fail(p + "/er_percent", "must be nonnegative");
        self.er_percent = EditRatio::FromDouble(v);
      }
      if (auto sc = item.value().find("score"); sc != item.value().end()) {
        const double v = r.Number(*sc, p + "/score");
        if (!std::isfinite(v)) r.Fail(p + "/score", "must be finite");
        self.score = static_cast<int>(std::lround(v));
      }
      out.self_reported[c] = self;
    }
  }
  return out;
}

}  // namespace

void ValidateRequest(const EvaluationRequest& request) {
  if (request.source_text.empty()) {
    throw InvalidRequestError("source text is empty");
  }
  if (request.translation_text.empty()) {
    throw InvalidRequestError("translation text is empty");
  }
  if (!FindTemplate(request.prompt_template_id)) {
    throw InvalidRequestError("unknown prompt template '" +
                              request.prompt_template_id + "'");
  }
}

std::vector<std::string> PromptTemplateIds() {
  std::vector<std::string> ids;
  for (const Template& t : kTemplates) ids.emplace_back(t.id);
  return ids;
}

std::string BuildPrompt(const EvaluationRequest& request) {
  ValidateRequest(request);

  std::string weight_lines;
  for (Category c : kAllCategories) {
    weight_lines += " - ";
    weight_lines += Code(c);
    weight_lines += " Weight = ";
    weight_lines += request.weight_profile[c].ToString();
    if (c != kAllCategories.back()) weight_lines += '\n';
  }

  std::string word_count_line;
  const std::int64_t words =
      CountWords(request.source_text, request.word_count_policy);
  if (words > 0) {
    word_count_line =
        "(Original Word Count for this source text: " + std::to_string(words) + ")";
  }

  std::string notes;
  if (request.domain_notes && !request.domain_notes->empty()) {
    notes = "\nAdditional Instructions:\n\n" + *request.domain_notes + "\n";
  }

  const std::map<std::string, std::string, std::less<>> values = {
      {"source_text", request.source_text},
      {"translation_text", request.translation_text},
      {"word_count_line", word_count_line},
      {"weight_lines", weight_lines},
      {"domain_notes", notes},
  };
  return Render(FindTemplate(request.prompt_template_id)->text, values);
}

std::string BuildReaskPrompt(const std::string& original_prompt,
                             const std::string& diagnostic) {
  return original_prompt +
         "\n\nYour previous answer could not be used (" + diagnostic +
         "). Reply again with exactly one JSON object that follows the schema "
         "above, with no surrounding text.\n";
}

std::map<Category, CategoryTally> ParsedEvaluation::Tally() const {
  std::map<Category, CategoryTally> tallies;
  for (Category c : kAllCategories) tallies[c] = CategoryTally{};
  for (const ErrorRecord& e : errors) {
    CategoryTally& t = tallies[e.category];
    t.words_to_correct += e.words_to_correct;
    t.error_count += 1;
  }
  return tallies;
}

ParsedEvaluation ParseResponse(const std::string& raw) {
  if (raw.empty()) throw NoJsonFoundError("response is empty", 0);
  std::optional<FoundObject> found = FindObject(raw, 0);
  if (!found) {
    throw NoJsonFoundError("no balanced JSON object found in response", 0);
  }
  ParsedEvaluation parsed = FromJson(found->value, found->begin);
  parsed.raw_response = raw;
  parsed.extra_objects_ignored = FindObject(raw, found->end).has_value();
  return parsed;
}

std::string SerializeEvaluation(const ParsedEvaluation& parsed) {
  OrderedJson root;
  OrderedJson errors = OrderedJson::array();
  for (const ErrorRecord& e : parsed.errors) {
    errors.push_back(OrderedJson{
        {"category", Code(e.category)},
        {"location", e.location},
        {"explanation", e.explanation},
        {"suggested_correction", e.suggested_correction},
        {"words_to_correct", e.words_to_correct},
    });
  }
  root["errors"] = std::move(errors);
  if (!parsed.self_reported.empty()) {
    OrderedJson summaries = OrderedJson::object();
    for (const auto& [c, self] : parsed.self_reported) {
      OrderedJson entry = OrderedJson::object();
      if (self.er_percent) entry["er_percent"] = self.er_percent->ToDouble();
      if (self.score) entry["score"] = *self.score;
      summaries[std::string(Code(c))] = std::move(entry);
    }
    root["summaries"] = std::move(summaries);
  }
  return root.dump(2);
}

std::string_view FieldName(Discrepancy::Field field) {
  return field == Discrepancy::Field::kErPercent ? "er_percent" : "score";
}

ReconcileResult Reconcile(const ParsedEvaluation& parsed,
                          const EvaluationRequest& request) {
  ValidateRequest(request);
  const std::int64_t words =
      CountWords(request.source_text, request.word_count_policy);
  if (words < 1) {
    throw InvalidRequestError("source text has no countable words under the '" +
                              request.word_count_policy.ToString() + "' policy");
  }

  ReconcileResult result;
  result.report = AssembleReport(parsed.Tally(), words, request.weight_profile,
                                 request.rating_bands);

  for (const auto& [c, self] : parsed.self_reported) {
    const CategoryResult& local = result.report.categories[c];
    if (self.er_percent && *self.er_percent != local.er_percent) {
      result.discrepancies.push_back({c, Discrepancy::Field::kErPercent,
                                      self.er_percent->ToDouble(),
                                      local.er_percent.ToDouble()});
    }
    if (self.score && *self.score != local.score) {
      result.discrepancies.push_back({c, Discrepancy::Field::kScore,
                                      static_cast<double>(*self.score),
                                      static_cast<double>(local.score)});
    }
  }

  for (std::size_t i = 0; i < parsed.errors.size(); ++i) {
    if (request.translation_text.find(parsed.errors[i].location) ==
        std::string::npos) {
      result.unlocated_errors.push_back(i);
    }
  }
  return result;
}

}  // namespace cater
