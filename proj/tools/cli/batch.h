#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cater/backend.h"
#include "cater/baselines.h"
#include "session.h"
#include "settings.h"

namespace cater::cli {

struct BatchRecord {
  std::string id;
  std::string source_text;
  std::string translation_text;
  std::vector<std::string> references;
  // Raw JSON object of per-record weight overrides.
  std::optional<std::string> weights;
};

// One JSON object per non-blank line with keys id, source_text,
// translation_text and optionally references and weights. Throws
// InvalidInputError naming the line for malformed input or duplicate ids.
std::vector<BatchRecord> ParseBatch(std::string_view jsonl);

struct RecordOutcome {
  std::string id;
  std::filesystem::path dir;
  std::optional<SessionResult> session;
  std::string error_kind;
  std::string error;
  bool ok() const { return session.has_value(); }
};

// Evaluates every record with at most settings.parallel concurrent backend
// calls. Record i is written to out/records/<name i>; outcomes come back in
// input order.
std::vector<RecordOutcome> RunBatch(const std::vector<BatchRecord>& records,
                                    const Settings& settings, Backend& backend,
                                    const std::filesystem::path& out);

// results.jsonl, summary.csv and summary.json under out.
void WriteBatchSummaries(const std::vector<RecordOutcome>& outcomes,
                         const std::filesystem::path& out);

// Filesystem-safe directory names, unique within the batch.
std::vector<std::string> RecordDirNames(const std::vector<BatchRecord>& records);

// comparison.csv and comparison.md under out; rows for successful records
// only, in input order. Returns the rows.
std::vector<ComparisonRow> WriteComparison(const std::vector<BatchRecord>& records,
                                           const std::vector<RecordOutcome>& outcomes,
                                           const CompareOptions& options,
                                           const std::filesystem::path& out);

// CSV with a header row naming id, source_text, translation_text and any
// number of columns whose names start with "reference"; returns JSONL.
std::string ConvertCsvToJsonl(std::string_view csv);

}  // namespace cater::cli
