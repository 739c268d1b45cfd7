#include "batch.h"

#include <atomic>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "cater/error.h"
#include "cater/serialization.h"
#include "csv.h"

namespace cater::cli {

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

std::string FormatMetric(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::vector<std::string> ScoreColumns(const ScoreReport& report) {
  std::vector<std::string> cols;
  for (Category c : kAllCategories) {
    cols.push_back(std::to_string(report.categories[c].score));
  }
  return cols;
}

}  // namespace

std::vector<BatchRecord> ParseBatch(std::string_view jsonl) {
  static const std::set<std::string> kKeys = {"id", "source_text", "translation_text",
                                              "references", "weights"};
  std::vector<BatchRecord> records;
  std::set<std::string> seen;
  std::istringstream in{std::string(jsonl)};
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "batch line " + std::to_string(lineno);
    const Json j = Json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      throw InvalidInputError(where + ": not a JSON object");
    }
    for (const auto& item : j.items()) {
      if (!kKeys.contains(item.key())) {
        throw InvalidInputError(where + ": unknown field \"" + item.key() + "\"");
      }
    }
    auto text = [&](const char* key) {
      auto it = j.find(key);
      if (it == j.end() || !it->is_string()) {
        throw InvalidInputError(where + ": \"" + key + "\" must be a string");
      }
      return it->get<std::string>();
    };
    BatchRecord r;
    r.id = text("id");
    if (r.id.empty()) throw InvalidInputError(where + ": empty id");
    if (!seen.insert(r.id).second) {
      throw InvalidInputError(where + ": duplicate id \"" + r.id + "\"");
    }
    r.source_text = text("source_text");
    r.translation_text = text("translation_text");
    if (auto it = j.find("references"); it != j.end() && !it->is_null()) {
      if (!it->is_array()) throw InvalidInputError(where + ": references must be an array");
      for (const Json& ref : *it) {
        if (!ref.is_string()) {
          throw InvalidInputError(where + ": references must be strings");
        }
        r.references.push_back(ref.get<std::string>());
      }
    }
    if (auto it = j.find("weights"); it != j.end() && !it->is_null()) {
      if (!it->is_object()) throw InvalidInputError(where + ": weights must be an object");
      r.weights = it->dump();
    }
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<std::string> RecordDirNames(const std::vector<BatchRecord>& records) {
  std::vector<std::string> names;
  std::set<std::string> used;
  for (const BatchRecord& r : records) {
    std::string base;
    for (unsigned char ch : r.id) {
      base += (std::isalnum(ch) || ch == '-' || ch == '_' || ch == '.') ? char(ch) : '_';
    }
    if (base.empty() || base == "." || base == "..") base = "_" + base;
    std::string name = base;
    for (int n = 2; used.contains(name); ++n) name = base + "~" + std::to_string(n);
    used.insert(name);
    names.push_back(std::move(name));
  }
  return names;
}

std::vector<RecordOutcome> RunBatch(const std::vector<BatchRecord>& records,
                                    const Settings& settings, Backend& backend,
                                    const fs::path& out) {
  const std::vector<std::string> names = RecordDirNames(records);
  std::vector<RecordOutcome> outcomes(records.size());
  std::atomic<std::size_t> next{0};

  auto work = [&] {
    for (std::size_t i = next++; i < records.size(); i = next++) {
      const BatchRecord& r = records[i];
      RecordOutcome& o = outcomes[i];
      o.id = r.id;
      o.dir = out / "records" / names[i];
      try {
        Settings local = settings;
        if (r.weights) local.weights = ApplyWeightOverrides(settings.weights, *r.weights);
        const EvaluationRequest req = MakeRequest(r.source_text, r.translation_text, local);
        if (fs::exists(o.dir)) fs::remove_all(o.dir);
        o.session = RunSession(req, backend, settings.reask, o.dir);
      } catch (const std::exception& e) {
        o.error_kind = ErrorKindOf(e);
        o.error = e.what();
      }
    }
  };

  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(settings.parallel), records.size());
  std::vector<std::jthread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  pool.clear();
  return outcomes;
}

void WriteBatchSummaries(const std::vector<RecordOutcome>& outcomes, const fs::path& out) {
  std::string jsonl;
  std::string csv = CsvRow({"id", "status", "overall_score", "overall_er_percent", "rating",
                            "la", "sa", "cf", "sta", "ic", "error"});
  std::size_t ok = 0;
  for (const RecordOutcome& o : outcomes) {
    OrderedJson line;
    line["id"] = o.id;
    line["status"] = o.ok() ? "ok" : "failed";
    line["session"] = (fs::path("records") / o.dir.filename()).generic_string();
    if (o.ok()) {
      ++ok;
      const ScoreReport& r = o.session->reconciled.report;
      line["overall_score"] = r.overall_score;
      line["overall_er_percent"] = r.overall_er_percent.ToDouble();
      line["rating"] = r.rating;
      OrderedJson scores;
      for (Category c : kAllCategories) scores[std::string(Code(c))] = r.categories[c].score;
      line["scores"] = std::move(scores);
      line["discrepancies"] = o.session->reconciled.discrepancies.size();
      std::vector<std::string> row = {o.id, "ok", std::to_string(r.overall_score),
                                      r.overall_er_percent.ToString(), r.rating};
      for (auto& s : ScoreColumns(r)) row.push_back(std::move(s));
      row.push_back("");
      csv += CsvRow(row);
    } else {
      line["error_kind"] = o.error_kind;
      line["error"] = o.error;
      csv += CsvRow({o.id, "failed", "", "", "", "", "", "", "", "", o.error});
    }
    jsonl += line.dump() + "\n";
  }
  OrderedJson summary{{"total", outcomes.size()},
                      {"ok", ok},
                      {"failed", outcomes.size() - ok}};
  WriteFile(out / "results.jsonl", jsonl);
  WriteFile(out / "summary.csv", csv);
  WriteFile(out / "summary.json", summary.dump(2) + "\n");
}

std::vector<ComparisonRow> WriteComparison(const std::vector<BatchRecord>& records,
                                           const std::vector<RecordOutcome>& outcomes,
                                           const CompareOptions& options,
                                           const fs::path& out) {
  std::vector<ComparisonRow> rows;
  std::vector<const RecordOutcome*> failed;
  std::string csv = CsvRow({"id", "cater_overall", "cater_er", "la", "sa", "cf", "sta", "ic",
                            "bleu", "ter"});
  std::string md =
      "| id | cater_overall | cater_er | la | sa | cf | sta | ic | bleu | ter |\n"
      "|---|---:|---:|---:|---:|---:|---:|---:|---:|---:|\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    const RecordOutcome& o = outcomes[i];
    if (!o.ok()) {
      failed.push_back(&o);
      continue;
    }
    ComparisonRow row = CompareMetrics(records[i].id, records[i].translation_text,
                                       records[i].references, o.session->reconciled.report,
                                       options);
    std::vector<std::string> fields = {row.id, std::to_string(row.cater_overall),
                                       row.cater_er.ToString()};
    for (Category c : kAllCategories) fields.push_back(std::to_string(row.category_scores[c]));
    fields.push_back(row.bleu ? FormatMetric(*row.bleu) : "");
    fields.push_back(row.ter ? FormatMetric(*row.ter) : "");
    csv += CsvRow(fields);
    md += "|";
    for (const std::string& f : fields) {
      std::string cell;
      for (char ch : f) cell += ch == '|' ? std::string("\\|") : std::string(1, ch);
      md += " " + cell + " |";
    }
    md += "\n";
    rows.push_back(std::move(row));
  }
  if (!failed.empty()) {
    md += "\nFailed records (not compared):\n\n";
    for (const RecordOutcome* o : failed) {
      md += "- " + o->id + ": " + o->error_kind + ": " + o->error + "\n";
    }
  }
  WriteFile(out / "comparison.csv", csv);
  WriteFile(out / "comparison.md", md);
  return rows;
}

std::string ConvertCsvToJsonl(std::string_view csv) {
  const auto rows = ParseCsv(csv);
  if (rows.empty()) throw InvalidInputError("CSV input has no header row");
  const std::vector<std::string>& header = rows.front();
  std::map<std::string, std::size_t> column;
  std::vector<std::size_t> reference_columns;
  for (std::size_t i = 0; i < header.size(); ++i) {
    const std::string& name = header[i];
    if (name.starts_with("reference")) {
      reference_columns.push_back(i);
    } else if (name == "id" || name == "source_text" || name == "translation_text") {
      column[name] = i;
    } else {
      throw InvalidInputError("unknown CSV column \"" + name + "\"");
    }
  }
  for (const char* required : {"id", "source_text", "translation_text"}) {
    if (!column.contains(required)) {
      throw InvalidInputError(std::string("CSV header lacks column \"") + required + "\"");
    }
  }
  std::string out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() != header.size()) {
      throw InvalidInputError("CSV row " + std::to_string(r + 1) + " has " +
                              std::to_string(row.size()) + " fields, header has " +
                              std::to_string(header.size()));
    }
    OrderedJson line;
    line["id"] = row[column["id"]];
    line["source_text"] = row[column["source_text"]];
    line["translation_text"] = row[column["translation_text"]];
    OrderedJson refs = OrderedJson::array();
    for (std::size_t c : reference_columns) {
      if (!row[c].empty()) refs.push_back(row[c]);
    }
    if (!refs.empty()) line["references"] = std::move(refs);
    out += line.dump() + "\n";
  }
  ParseBatch(out);
  return out;
}

}  // namespace cater::cli
