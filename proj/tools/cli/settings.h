#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "cater/backend.h"
#include "cater/scoring.h"
#include "cater/text_metrics.h"

namespace cater::cli {

// Values given on the command line; unset fields fall through to the config
// file, then the environment, then built-in defaults.
struct Flags {
  std::optional<std::string> config_file;
  std::optional<std::string> backend;
  std::optional<std::string> endpoint;
  std::optional<std::string> model;
  std::optional<std::string> api_key_env;
  std::optional<std::string> replay_dir;
  std::optional<std::string> weights_file;
  std::optional<std::string> word_count_policy;
  std::optional<std::string> template_id;
  std::optional<std::string> domain_notes;
  std::optional<int> parallel;
  bool record = false;
  bool reask = false;
};

enum class BackendKind { kLive, kReplay };

struct Settings {
  BackendKind backend = BackendKind::kLive;
  BackendConfig backend_config;
  std::filesystem::path replay_dir = "replay";
  bool record = false;
  bool reask = false;
  int parallel = 4;
  // Derived from each source text when unset.
  std::optional<WordCountPolicy> word_count_policy;
  WeightProfile weights;
  RatingBands rating_bands;
  std::string template_id = "cater-v1";
  std::optional<std::string> domain_notes;
};

// Throws InvalidInputError for unreadable or malformed configuration.
Settings ResolveSettings(const Flags& flags);

std::shared_ptr<Backend> MakeBackend(const Settings& settings);

std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, std::string_view content);

}  // namespace cater::cli
