#include "session.h"

#include <chrono>
#include <ctime>

#include <nlohmann/json.hpp>

#include "cater/error.h"
#include "cater/serialization.h"

namespace cater::cli {

namespace {

namespace fs = std::filesystem;
using OrderedJson = nlohmann::ordered_json;

std::string UtcStamp(std::chrono::system_clock::time_point t, const char* format) {
  const std::time_t secs = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, format, &tm);
  return buf;
}

}  // namespace

std::string ErrorKindOf(const std::exception& e) {
  if (dynamic_cast<const SchemaViolationError*>(&e)) return "schema";
  if (dynamic_cast<const ParseError*>(&e)) return "parse";
  if (dynamic_cast<const MissingFixtureError*>(&e)) return "missing_fixture";
  if (dynamic_cast<const AuthError*>(&e)) return "auth";
  if (dynamic_cast<const BackendFailure*>(&e)) return "backend";
  if (dynamic_cast<const InvalidInputError*>(&e)) return "invalid_input";
  return "internal";
}

namespace {

struct Meta {
  OrderedJson json;
  explicit Meta(const std::string& prompt) {
    json["session_id"] = nullptr;
    json["prompt_sha256"] = Sha256Hex(prompt);
    json["started_at"] = UtcStamp(std::chrono::system_clock::now(), "%Y-%m-%dT%H:%M:%SZ");
  }
  void Finish(const fs::path& dir) {
    json["session_id"] = dir.filename().string();
    json["finished_at"] = UtcStamp(std::chrono::system_clock::now(), "%Y-%m-%dT%H:%M:%SZ");
    WriteFile(dir / kMetaFile, json.dump(2) + "\n");
  }
};

void RecordCompletion(Meta& meta, const CompletionOutcome& outcome) {
  meta.json["backend"] = outcome.backend;
  meta.json["attempts"] = meta.json.value("attempts", 0) + outcome.attempts;
  meta.json["latency_ms"] = meta.json.value("latency_ms", std::int64_t{0}) +
                            static_cast<std::int64_t>(outcome.latency.count());
}

}  // namespace

std::string TrimTrailing(std::string text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) {
    text.pop_back();
  }
  return text;
}

EvaluationRequest MakeRequest(std::string source, std::string translation,
                              const Settings& settings) {
  EvaluationRequest req;
  req.word_count_policy = settings.word_count_policy.value_or(DefaultPolicyFor(source));
  req.source_text = std::move(source);
  req.translation_text = std::move(translation);
  req.weight_profile = settings.weights;
  req.prompt_template_id = settings.template_id;
  req.domain_notes = settings.domain_notes;
  req.rating_bands = settings.rating_bands;
  return req;
}

fs::path NewSessionDir(const fs::path& root, const std::string& prompt) {
  const std::string base = Sha256Hex(prompt).substr(0, 12) + "-" +
                           UtcStamp(std::chrono::system_clock::now(), "%Y%m%dT%H%M%SZ");
  fs::path dir = root / base;
  for (int n = 2; fs::exists(dir); ++n) dir = root / (base + "-" + std::to_string(n));
  return dir;
}

SessionResult RunSession(const EvaluationRequest& request, Backend& backend, bool reask,
                         const fs::path& dir) {
  ValidateRequest(request);
  if (CountWords(request.source_text, request.word_count_policy) < 1) {
    throw InvalidRequestError("source text contains no countable words");
  }
  const std::string prompt = BuildPrompt(request);
  if (fs::exists(dir)) throw Error("session directory already exists: " + dir.string());
  fs::create_directories(dir);

  Meta meta(prompt);
  meta.json["template_id"] = request.prompt_template_id;
  meta.json["word_count_policy"] = request.word_count_policy.ToString();
  WriteFile(dir / kRequestFile, RequestToJson(request));
  WriteFile(dir / kPromptFile, prompt);

  try {
    CompletionOutcome outcome = backend.Complete(prompt);
    RecordCompletion(meta, outcome);
    WriteFile(dir / kResponseFile, outcome.text);

    SessionResult result;
    result.dir = dir;
    try {
      result.parsed = ParseResponse(outcome.text);
      meta.json["reasked"] = false;
    } catch (const ParseError& first) {
      if (!reask) throw;
      const std::string retry_prompt = BuildReaskPrompt(prompt, first.what());
      meta.json["reasked"] = true;
      meta.json["first_parse_error"] = first.what();
      WriteFile(dir / "reask_prompt.txt", retry_prompt);
      outcome = backend.Complete(retry_prompt);
      RecordCompletion(meta, outcome);
      WriteFile(dir / "reask_response.txt", outcome.text);
      result.parsed = ParseResponse(outcome.text);
    }
    WriteFile(dir / kParsedFile, SerializeEvaluation(result.parsed));

    result.reconciled = Reconcile(result.parsed, request);
    WriteFile(dir / kReportFile,
              ReportToJson(result.reconciled.report, result.reconciled.discrepancies));
    WriteFile(dir / kMarkdownFile, RenderMarkdownReport(result.parsed, result.reconciled));

    meta.json["status"] = "ok";
    meta.json["extra_objects_ignored"] = result.parsed.extra_objects_ignored;
    meta.json["unlocated_errors"] = result.reconciled.unlocated_errors;
    meta.Finish(dir);
    return result;
  } catch (const std::exception& e) {
    meta.json["status"] = "failed";
    meta.json["error_kind"] = ErrorKindOf(e);
    meta.json["error"] = e.what();
    if (const auto* pe = dynamic_cast<const ParseError*>(&e)) {
      meta.json["error_position"] = pe->position();
    }
    meta.Finish(dir);
    throw;
  }
}

RescoreInput LoadRescoreInput(const fs::path& path,
                              const std::optional<fs::path>& request_file) {
  fs::path parsed_path = path;
  fs::path request_path;
  if (fs::is_directory(path)) {
    parsed_path = path / kParsedFile;
    request_path = path / kRequestFile;
  } else {
    request_path = path.parent_path() / kRequestFile;
  }
  if (request_file) request_path = *request_file;
  if (!fs::is_regular_file(parsed_path)) {
    throw InvalidInputError("no parsed evaluation at " + parsed_path.string());
  }
  if (!fs::is_regular_file(request_path)) {
    throw InvalidInputError("no request at " + request_path.string() +
                            " (pass --request)");
  }
  RescoreInput in;
  try {
    in.parsed = ParseResponse(ReadFile(parsed_path));
  } catch (const ParseError& e) {
    throw InvalidInputError("unreadable parsed evaluation " + parsed_path.string() + ": " +
                            e.what());
  }
  in.request = RequestFromJson(ReadFile(request_path));
  return in;
}

}  // namespace cater::cli
