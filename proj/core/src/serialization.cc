#include "cater/serialization.h"

#include <sstream>

#include <nlohmann/json.hpp>

#include "cater/error.h"

namespace cater {

namespace {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

OrderedJson WeightValue(const Weight& w) {
  if (w.micros() % Weight::kScale == 0) {
    return OrderedJson(w.micros() / Weight::kScale);
  }
  return OrderedJson(w.ToDouble());
}

OrderedJson WeightsObject(const WeightProfile& weights) {
  OrderedJson out = OrderedJson::object();
  for (Category c : kAllCategories) {
    out[std::string(Code(c))] = WeightValue(weights[c]);
  }
  return out;
}

Weight WeightFromJson(const Json& v, const std::string& where) {
  if (v.is_number()) return Weight::FromDouble(v.get<double>());
  if (v.is_string()) return Weight::FromString(v.get<std::string>());
  throw InvalidInputError("weight for " + where + " must be a number");
}

Json ParseJson(const std::string& text, const char* what) {
  Json j = Json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) {
    throw InvalidInputError(std::string("malformed JSON in ") + what);
  }
  return j;
}

WeightProfile OverridesFromObject(const WeightProfile& base, const Json& obj) {
  if (!obj.is_object()) throw InvalidInputError("weights must be a JSON object");
  WeightProfile out = base;
  for (const auto& item : obj.items()) {
    auto c = ParseCategory(item.key());
    if (!c) throw InvalidInputError("unknown category in weights: " + item.key());
    out.Set(*c, WeightFromJson(item.value(), item.key()));
  }
  return out;
}

OrderedJson BandsArray(const RatingBands& bands) {
  OrderedJson arr = OrderedJson::array();
  for (const auto& b : bands.bands()) {
    arr.push_back(OrderedJson{{"min", b.min_score}, {"label", b.label}});
  }
  return arr;
}

RatingBands BandsFromJson(const Json& arr) {
  if (!arr.is_array()) throw InvalidInputError("rating bands must be an array");
  std::vector<RatingBands::Band> bands;
  for (const Json& b : arr) {
    if (!b.is_object() || !b.contains("min") || !b.contains("label") ||
        !b["min"].is_number_integer() || !b["label"].is_string()) {
      throw InvalidInputError(
          "each rating band needs an integer \"min\" and a string \"label\"");
    }
    bands.push_back({b["min"].get<int>(), b["label"].get<std::string>()});
  }
  return RatingBands(std::move(bands));
}

std::string Escape(const std::string& s) {
  // Markdown table cells: pipes and newlines would break the row.
  std::string out;
  for (char ch : s) {
    if (ch == '|') {
      out += "\\|";
    } else if (ch == '\n') {
      out += ' ';
    } else {
      out += ch;
    }
  }
  return out;
}

}  // namespace

std::string ReportToJson(const ScoreReport& report,
                         std::span<const Discrepancy> discrepancies) {
  OrderedJson root;
  root["source_word_count"] = report.source_word_count;
  root["weight_profile"] = WeightsObject(report.weight_profile);
  OrderedJson cats = OrderedJson::array();
  for (Category c : kAllCategories) {
    const CategoryResult& r = report.categories[c];
    cats.push_back(OrderedJson{
        {"category", Code(c)},
        {"error_count", r.error_count},
        {"words_to_correct", r.words_to_correct},
        {"er_percent", r.er_percent.ToDouble()},
        {"score", r.score},
    });
  }
  root["categories"] = std::move(cats);
  root["overall_score"] = report.overall_score;
  root["overall_er_percent"] = report.overall_er_percent.ToDouble();
  root["rating"] = report.rating;
  OrderedJson disc = OrderedJson::array();
  for (const Discrepancy& d : discrepancies) {
    OrderedJson entry{{"category", Code(d.category)}, {"field", FieldName(d.field)}};
    if (d.field == Discrepancy::Field::kScore) {
      entry["self_reported"] = static_cast<std::int64_t>(d.self_reported);
      entry["locally_computed"] = static_cast<std::int64_t>(d.locally_computed);
    } else {
      entry["self_reported"] = d.self_reported;
      entry["locally_computed"] = d.locally_computed;
    }
    disc.push_back(std::move(entry));
  }
  root["discrepancies"] = std::move(disc);
  return root.dump(2) + "\n";
}

std::string WeightsToJson(const WeightProfile& weights) {
  return WeightsObject(weights).dump(2) + "\n";
}

WeightProfile ApplyWeightOverrides(const WeightProfile& base,
                                   const std::string& json_object) {
  return OverridesFromObject(base, ParseJson(json_object, "weights"));
}

std::string RatingBandsToJson(const RatingBands& bands) {
  return BandsArray(bands).dump();
}

RatingBands RatingBandsFromJson(const std::string& json_array) {
  return BandsFromJson(ParseJson(json_array, "rating bands"));
}

std::string RequestToJson(const EvaluationRequest& request) {
  OrderedJson root;
  root["source_text"] = request.source_text;
  root["translation_text"] = request.translation_text;
  root["weight_profile"] = WeightsObject(request.weight_profile);
  root["word_count_policy"] = request.word_count_policy.ToString();
  root["prompt_template_id"] = request.prompt_template_id;
  root["domain_notes"] = request.domain_notes ? OrderedJson(*request.domain_notes)
                                              : OrderedJson(nullptr);
  root["rating_bands"] = BandsArray(request.rating_bands);
  return root.dump(2) + "\n";
}

EvaluationRequest RequestFromJson(const std::string& json) {
  const Json root = ParseJson(json, "request");
  if (!root.is_object()) throw InvalidInputError("request must be a JSON object");
  auto text = [&](const char* key) -> std::string {
    auto it = root.find(key);
    if (it == root.end() || !it->is_string()) {
      throw InvalidInputError(std::string("request field \"") + key +
                              "\" must be a string");
    }
    return it->get<std::string>();
  };
  EvaluationRequest req;
  req.source_text = text("source_text");
  req.translation_text = text("translation_text");
  if (auto it = root.find("weight_profile"); it != root.end()) {
    req.weight_profile = OverridesFromObject(WeightProfile::Default(), *it);
  }
  if (auto it = root.find("word_count_policy"); it != root.end()) {
    req.word_count_policy = WordCountPolicy::Parse(it->get<std::string>());
  }
  if (auto it = root.find("prompt_template_id"); it != root.end()) {
    req.prompt_template_id = it->get<std::string>();
  }
  if (auto it = root.find("domain_notes"); it != root.end() && it->is_string()) {
    req.domain_notes = it->get<std::string>();
  }
  if (auto it = root.find("rating_bands"); it != root.end()) {
    req.rating_bands = BandsFromJson(*it);
  }
  return req;
}

std::string RenderMarkdownReport(const ParsedEvaluation& parsed,
                                 const ReconcileResult& result) {
  const ScoreReport& report = result.report;
  std::ostringstream md;
  md << "# Translation Quality Report\n\n";
  md << "## Identified Errors\n";
  for (Category c : kAllCategories) {
    md << "\n### " << DisplayName(c) << " (" << Code(c) << ")\n\n";
    bool any = false;
    for (std::size_t i = 0; i < parsed.errors.size(); ++i) {
      const ErrorRecord& e = parsed.errors[i];
      if (e.category != c) continue;
      any = true;
      const bool unlocated =
          std::find(result.unlocated_errors.begin(), result.unlocated_errors.end(),
                    i) != result.unlocated_errors.end();
      md << "- **Location:** \"" << e.location << "\""
         << (unlocated ? " _(not found verbatim in the translation)_" : "") << "\n";
      md << "  - **Explanation:** " << e.explanation << "\n";
      md << "  - **Correction:** " << e.suggested_correction << "\n";
      md << "  - **Words to Correct:** " << e.words_to_correct << "\n";
    }
    if (!any) md << "No errors detected.\n";
  }

  md << "\n## Category Summaries\n\n";
  md << "| Category | Errors | Words to Correct | ER% | Weight | Score |\n";
  md << "|---|---:|---:|---:|---:|---:|\n";
  for (Category c : kAllCategories) {
    const CategoryResult& r = report.categories[c];
    md << "| " << Escape(std::string(DisplayName(c))) << " (" << Code(c) << ") | "
       << r.error_count << " | " << r.words_to_correct << " | "
       << r.er_percent.ToString() << "% | "
       << report.weight_profile[c].ToString() << " | " << r.score << " |\n";
  }

  md << "\n## Overall\n\n";
  md << "- **Original Word Count:** " << report.source_word_count << "\n";
  md << "- **Overall Score:** " << report.overall_score << "/100\n";
  md << "- **Overall ER%:** " << report.overall_er_percent.ToString() << "%\n";
  md << "- **Rating:** " << report.rating << "\n";

  if (!result.discrepancies.empty()) {
    md << "\n## Discrepancies with Self-Reported Figures\n\n";
    md << "| Category | Field | Self-reported | Recomputed |\n";
    md << "|---|---|---:|---:|\n";
    for (const Discrepancy& d : result.discrepancies) {
      const bool score = d.field == Discrepancy::Field::kScore;
      auto fmt = [&](double v) {
        return score ? std::to_string(static_cast<long long>(v))
                     : EditRatio::FromDouble(v).ToString();
      };
      md << "| " << Code(d.category) << " | " << FieldName(d.field) << " | "
         << fmt(d.self_reported) << " | " << fmt(d.locally_computed) << " |\n";
    }
  }
  return md.str();
}

}  // namespace cater
