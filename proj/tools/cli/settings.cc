#include "settings.h"

#include <fstream>
#include <iostream>
#include <iterator>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cater/error.h"
#include "cater/serialization.h"

namespace cater::cli {

namespace {

using Json = nlohmann::json;

BackendKind ParseBackendKind(const std::string& name) {
  if (name == "live") return BackendKind::kLive;
  if (name == "replay") return BackendKind::kReplay;
  throw InvalidInputError("unknown backend \"" + name + "\" (expected live or replay)");
}

template <typename T>
std::optional<T> Field(const Json& config, const char* key) {
  auto it = config.find(key);
  if (it == config.end() || it->is_null()) return std::nullopt;
  try {
    return it->get<T>();
  } catch (const Json::exception&) {
    throw InvalidInputError(std::string("config field \"") + key + "\" has the wrong type");
  }
}

const std::set<std::string>& ConfigKeys() {
  static const std::set<std::string> keys = {
      "backend",     "endpoint",     "model",           "api_key_env",
      "replay_dir",  "weights",      "weights_file",    "word_count_policy",
      "template",    "domain_notes", "parallel",        "temperature",
      "max_attempts", "timeout_seconds", "max_output_tokens", "rating_bands",
      "reask",       "record"};
  return keys;
}

void ApplyConfig(const Json& config, Settings& s, std::optional<std::string>& weights_file) {
  if (!config.is_object()) throw InvalidInputError("config file must hold a JSON object");
  for (const auto& item : config.items()) {
    if (!ConfigKeys().contains(item.key())) {
      throw InvalidInputError("unknown config field \"" + item.key() + "\"");
    }
  }
  if (auto v = Field<std::string>(config, "backend")) s.backend = ParseBackendKind(*v);
  if (auto v = Field<std::string>(config, "endpoint")) s.backend_config.endpoint = *v;
  if (auto v = Field<std::string>(config, "model")) s.backend_config.model = *v;
  if (auto v = Field<std::string>(config, "api_key_env")) s.backend_config.api_key_env = *v;
  if (auto v = Field<std::string>(config, "replay_dir")) s.replay_dir = *v;
  if (auto v = Field<std::string>(config, "word_count_policy")) {
    s.word_count_policy = WordCountPolicy::Parse(*v);
  }
  if (auto v = Field<std::string>(config, "template")) s.template_id = *v;
  if (auto v = Field<std::string>(config, "domain_notes")) s.domain_notes = *v;
  if (auto v = Field<int>(config, "parallel")) s.parallel = *v;
  if (auto v = Field<double>(config, "temperature")) s.backend_config.temperature = *v;
  if (auto v = Field<int>(config, "max_attempts")) s.backend_config.retry.max_attempts = *v;
  if (auto v = Field<int>(config, "max_output_tokens")) s.backend_config.max_output_tokens = *v;
  if (auto v = Field<double>(config, "timeout_seconds")) {
    s.backend_config.timeout = std::chrono::milliseconds(static_cast<long long>(*v * 1000));
  }
  if (auto v = Field<bool>(config, "reask")) s.reask = *v;
  if (auto v = Field<bool>(config, "record")) s.record = *v;
  if (auto v = Field<std::string>(config, "weights_file")) weights_file = *v;
  if (auto it = config.find("weights"); it != config.end()) {
    s.weights = ApplyWeightOverrides(s.weights, it->dump());
  }
  if (auto it = config.find("rating_bands"); it != config.end()) {
    s.rating_bands = RatingBandsFromJson(it->dump());
  }
}

}  // namespace

std::string ReadFile(const std::filesystem::path& path) {
  if (path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), {});
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInputError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error("cannot write " + path.string());
}

Settings ResolveSettings(const Flags& flags) {
  Settings s;
  std::optional<std::string> weights_file;

  if (auto v = GetEnv("CATER_BACKEND")) s.backend = ParseBackendKind(*v);
  if (auto v = GetEnv("CATER_ENDPOINT")) s.backend_config.endpoint = *v;
  if (auto v = GetEnv("CATER_MODEL")) s.backend_config.model = *v;
  if (auto v = GetEnv("CATER_REPLAY_DIR")) s.replay_dir = *v;

  if (flags.config_file) {
    const Json config = Json::parse(ReadFile(*flags.config_file), nullptr, false);
    if (config.is_discarded()) {
      throw InvalidInputError("malformed JSON in config file " + *flags.config_file);
    }
    ApplyConfig(config, s, weights_file);
  }

  if (flags.backend) s.backend = ParseBackendKind(*flags.backend);
  if (flags.endpoint) s.backend_config.endpoint = *flags.endpoint;
  if (flags.model) s.backend_config.model = *flags.model;
  if (flags.api_key_env) s.backend_config.api_key_env = *flags.api_key_env;
  if (flags.replay_dir) s.replay_dir = *flags.replay_dir;
  if (flags.word_count_policy) {
    s.word_count_policy = WordCountPolicy::Parse(*flags.word_count_policy);
  }
  if (flags.template_id) s.template_id = *flags.template_id;
  if (flags.domain_notes) s.domain_notes = *flags.domain_notes;
  if (flags.parallel) s.parallel = *flags.parallel;
  if (flags.weights_file) weights_file = *flags.weights_file;
  s.record = s.record || flags.record;
  s.reask = s.reask || flags.reask;

  if (weights_file) s.weights = ApplyWeightOverrides(s.weights, ReadFile(*weights_file));
  if (s.parallel < 1) throw InvalidInputError("--parallel must be at least 1");
  s.backend_config.Validate();
  return s;
}

std::shared_ptr<Backend> MakeBackend(const Settings& settings) {
  if (settings.backend == BackendKind::kReplay) {
    return std::make_shared<ReplayBackend>(ReplayStore(settings.replay_dir));
  }
  auto live = std::make_shared<LiveBackend>(settings.backend_config, MakeHttpTransport());
  if (settings.record) {
    return std::make_shared<RecordingBackend>(std::move(live), ReplayStore(settings.replay_dir));
  }
  return live;
}

}  // namespace cater::cli
