#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>

namespace cater {

// Lowercase hex SHA-256 of the UTF-8 bytes.
std::string Sha256Hex(std::string_view data);

struct RetryPolicy {
  int max_attempts = 3;
  // Delay before retry k (1-based) is base * 2^(k-1).
  std::chrono::milliseconds backoff_base{500};
};

struct BackendConfig {
  std::string endpoint = "https://api.openai.com/v1/chat/completions";
  std::string model = "gpt-4o";
  double temperature = 0.0;
  int max_output_tokens = 4096;
  std::chrono::milliseconds timeout{std::chrono::seconds(120)};
  RetryPolicy retry;
  std::string api_key_env = "CATER_API_KEY";

  // Throws InvalidInputError when out of range.
  void Validate() const;
};

struct CompletionOutcome {
  std::string text;
  std::chrono::milliseconds latency{0};
  int attempts = 0;
  std::string backend;
};

class Backend {
 public:
  virtual ~Backend() = default;

  // Safe to call concurrently.
  virtual CompletionOutcome Complete(const std::string& prompt) = 0;
  virtual std::string Name() const = 0;
};

// Content-addressed store of canned responses: <dir>/<sha256(prompt)>.txt.
class ReplayStore {
 public:
  explicit ReplayStore(std::filesystem::path dir);

  static std::string KeyFor(std::string_view prompt) { return Sha256Hex(prompt); }

  // Stores text under KeyFor(prompt) and returns the key.
  std::string Put(std::string_view prompt, std::string_view text) const;
  void PutByKey(const std::string& key, std::string_view text) const;

  // Throws MissingFixtureError if absent.
  std::string Get(const std::string& key) const;
  bool Contains(const std::string& key) const;

  std::filesystem::path PathFor(const std::string& key) const;
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
};

class ReplayBackend final : public Backend {
 public:
  explicit ReplayBackend(ReplayStore store) : store_(std::move(store)) {}

  CompletionOutcome Complete(const std::string& prompt) override;
  std::string Name() const override { return "replay"; }

 private:
  ReplayStore store_;
};

struct HttpResponse {
  int status = 0;
  std::string body;
};

// One HTTP POST. Implementations throw TransportError for connection-level
// failures (refused, timed out); HTTP error statuses are returned, not thrown.
class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResponse Post(const std::string& url,
                            const std::map<std::string, std::string>& headers,
                            const std::string& body,
                            std::chrono::milliseconds timeout) = 0;
};

// cpp-httplib based; a fresh connection per request so it is thread safe.
std::unique_ptr<HttpTransport> MakeHttpTransport();

// Chat-completions style endpoint: POST {model, temperature, max_tokens,
// messages:[{role:"user", content}]}, reply choices[0].message.content.
class LiveBackend final : public Backend {
 public:
  using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;
  using Sleeper = std::function<void(std::chrono::milliseconds)>;

  LiveBackend(BackendConfig config, std::unique_ptr<HttpTransport> transport,
              EnvLookup env = {}, Sleeper sleeper = {});

  CompletionOutcome Complete(const std::string& prompt) override;
  std::string Name() const override { return "live:" + config_.model; }

  const BackendConfig& config() const { return config_; }

 private:
  BackendConfig config_;
  std::unique_ptr<HttpTransport> transport_;
  EnvLookup env_;
  Sleeper sleeper_;
};

// Forwards to another backend and stores every response in a replay store.
class RecordingBackend final : public Backend {
 public:
  RecordingBackend(std::shared_ptr<Backend> inner, ReplayStore store)
      : inner_(std::move(inner)), store_(std::move(store)) {}

  CompletionOutcome Complete(const std::string& prompt) override;
  std::string Name() const override { return inner_->Name(); }

 private:
  std::shared_ptr<Backend> inner_;
  ReplayStore store_;
};

// Reads an environment variable; nullopt when unset or empty.
std::optional<std::string> GetEnv(const std::string& name);

}  // namespace cater
