#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "cater/backend.h"
#include "cater/protocol.h"
#include "settings.h"

namespace cater::cli {

// Files written into every session directory.
inline constexpr char kRequestFile[] = "request.json";
inline constexpr char kPromptFile[] = "prompt.txt";
inline constexpr char kResponseFile[] = "response.txt";
inline constexpr char kParsedFile[] = "parsed.json";
inline constexpr char kReportFile[] = "report.json";
inline constexpr char kMarkdownFile[] = "report.md";
inline constexpr char kMetaFile[] = "meta.json";

struct SessionResult {
  std::filesystem::path dir;
  ParsedEvaluation parsed;
  ReconcileResult reconciled;
};

// Builds the request an evaluation would send for this pair under settings.
EvaluationRequest MakeRequest(std::string source, std::string translation,
                              const Settings& settings);

// Runs prompt -> backend -> parse -> reconcile and persists every stage into
// dir, which must not exist yet. The request is validated before anything is
// written. Failures after that leave the partial session plus an error entry
// in meta.json, then rethrow.
SessionResult RunSession(const EvaluationRequest& request, Backend& backend,
                         bool reask, const std::filesystem::path& dir);

// <first 12 hex digits of the prompt hash>-<UTC timestamp>, suffixed with -N
// when that directory already exists under root.
std::filesystem::path NewSessionDir(const std::filesystem::path& root,
                                    const std::string& prompt);

struct RescoreInput {
  ParsedEvaluation parsed;
  EvaluationRequest request;
};

// Loads parsed.json and request.json from a session directory, or a bare
// parsed.json plus an explicit request file.
RescoreInput LoadRescoreInput(const std::filesystem::path& path,
                              const std::optional<std::filesystem::path>& request_file);

// Short machine-readable class of a failure: schema, parse, missing_fixture,
// auth, backend, invalid_input or internal.
std::string ErrorKindOf(const std::exception& e);

// Drops trailing whitespace (files usually end with a newline).
std::string TrimTrailing(std::string text);

}  // namespace cater::cli
