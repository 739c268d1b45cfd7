#include "cater/backend.h"

#include <array>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "cater/error.h"

namespace cater {

namespace {

using Json = nlohmann::json;
using Clock = std::chrono::steady_clock;

std::chrono::milliseconds Since(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start);
}

class HttplibTransport final : public HttpTransport {
 public:
  HttpResponse Post(const std::string& url,
                    const std::map<std::string, std::string>& headers,
                    const std::string& body,
                    std::chrono::milliseconds timeout) override {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
      throw InvalidInputError("endpoint must be an absolute http(s) URL: " + url);
    }
    const auto path_begin = url.find('/', scheme_end + 3);
    const std::string origin = url.substr(0, path_begin);
    const std::string path =
        path_begin == std::string::npos ? "/" : url.substr(path_begin);

    httplib::Client client(origin);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout);
    const auto usecs =
        std::chrono::duration_cast<std::chrono::microseconds>(timeout - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    client.set_write_timeout(secs.count(), usecs.count());

    httplib::Headers h;
    for (const auto& [k, v] : headers) h.emplace(k, v);
    auto res = client.Post(path, h, body, "application/json");
    if (!res) {
      throw TransportError("POST " + url + " failed: " + httplib::to_string(res.error()));
    }
    return HttpResponse{res->status, res->body};
  }
};

bool IsTransientStatus(int status) { return status == 429 || status >= 500; }

std::string ExtractContent(const std::string& body) {
  const Json j = Json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) {
    throw BackendError("backend reply is not a JSON object");
  }
  const auto choices = j.find("choices");
  if (choices == j.end() || !choices->is_array() || choices->empty()) {
    throw BackendError("backend reply has no choices");
  }
  const Json& first = (*choices)[0];
  if (first.contains("message") && first["message"].contains("content") &&
      first["message"]["content"].is_string()) {
    return first["message"]["content"].get<std::string>();
  }
  if (first.contains("text") && first["text"].is_string()) {
    return first["text"].get<std::string>();
  }
  throw BackendError("backend reply has no message content");
}

}  // namespace

std::string Sha256Hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(),
                 nullptr) != 1) {
    throw Error("SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xf];
  }
  return out;
}

std::optional<std::string> GetEnv(const std::string& name) {
  const char* v = std::getenv(name.c_str());
  if (v == nullptr || *v == '\0') return std::nullopt;
  return std::string(v);
}

void BackendConfig::Validate() const {
  if (!(temperature >= 0.0 && temperature <= 2.0)) {
    throw InvalidInputError("temperature must be in [0, 2]");
  }
  if (retry.max_attempts < 1) throw InvalidInputError("max attempts must be >= 1");
  if (timeout.count() <= 0) throw InvalidInputError("timeout must be positive");
  if (retry.backoff_base.count() < 0) {
    throw InvalidInputError("backoff base must be nonnegative");
  }
  if (max_output_tokens < 1) throw InvalidInputError("max output tokens must be >= 1");
  if (endpoint.empty()) throw InvalidInputError("endpoint is empty");
  if (model.empty()) throw InvalidInputError("model is empty");
}

ReplayStore::ReplayStore(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::filesystem::path ReplayStore::PathFor(const std::string& key) const {
  return dir_ / (key + ".txt");
}

std::string ReplayStore::Put(std::string_view prompt, std::string_view text) const {
  std::string key = KeyFor(prompt);
  PutByKey(key, text);
  return key;
}

void ReplayStore::PutByKey(const std::string& key, std::string_view text) const {
  std::filesystem::create_directories(dir_);
  const auto final_path = PathFor(key);
  auto tmp = final_path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write replay fixture " + tmp.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw Error("cannot write replay fixture " + tmp.string());
  }
  std::filesystem::rename(tmp, final_path);
}

bool ReplayStore::Contains(const std::string& key) const {
  return std::filesystem::is_regular_file(PathFor(key));
}

std::string ReplayStore::Get(const std::string& key) const {
  std::ifstream in(PathFor(key), std::ios::binary);
  if (!in) {
    throw MissingFixtureError(
        "no replay fixture for prompt hash " + key + " in " + dir_.string(), key);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CompletionOutcome ReplayBackend::Complete(const std::string& prompt) {
  const auto start = Clock::now();
  CompletionOutcome out;
  out.text = store_.Get(ReplayStore::KeyFor(prompt));
  out.attempts = 1;
  out.backend = Name();
  out.latency = Since(start);
  return out;
}

std::unique_ptr<HttpTransport> MakeHttpTransport() {
  return std::make_unique<HttplibTransport>();
}

LiveBackend::LiveBackend(BackendConfig config,
                         std::unique_ptr<HttpTransport> transport, EnvLookup env,
                         Sleeper sleeper)
    : config_(std::move(config)),
      transport_(std::move(transport)),
      env_(env ? std::move(env) : EnvLookup(GetEnv)),
      sleeper_(sleeper ? std::move(sleeper) : Sleeper([](std::chrono::milliseconds d) {
        std::this_thread::sleep_for(d);
      })) {
  config_.Validate();
  if (!transport_) transport_ = MakeHttpTransport();
}

CompletionOutcome LiveBackend::Complete(const std::string& prompt) {
  if (prompt.empty()) throw InvalidInputError("prompt is empty");
  const std::optional<std::string> key = env_(config_.api_key_env);
  if (!key) {
    throw AuthError("API key environment variable " + config_.api_key_env +
                    " is not set");
  }

  const Json request = {
      {"model", config_.model},
      {"temperature", config_.temperature},
      {"max_tokens", config_.max_output_tokens},
      {"messages", Json::array({Json{{"role", "user"}, {"content", prompt}}})},
  };
  const std::string body = request.dump();
  const std::map<std::string, std::string> headers = {
      {"Authorization", "Bearer " + *key},
  };

  const auto start = Clock::now();
  std::string last_failure;
  for (int attempt = 1; attempt <= config_.retry.max_attempts; ++attempt) {
    try {
      const HttpResponse res =
          transport_->Post(config_.endpoint, headers, body, config_.timeout);
      if (res.status >= 200 && res.status < 300) {
        CompletionOutcome out;
        out.text = ExtractContent(res.body);
        out.attempts = attempt;
        out.backend = Name();
        out.latency = Since(start);
        return out;
      }
      if (res.status == 401 || res.status == 403) {
        throw AuthError("endpoint rejected the API key (HTTP " +
                        std::to_string(res.status) + ")");
      }
      if (!IsTransientStatus(res.status)) {
        throw BackendError("endpoint returned HTTP " + std::to_string(res.status) +
                           ": " + res.body.substr(0, 200));
      }
      last_failure = "HTTP " + std::to_string(res.status);
    } catch (const TransportError& e) {
      last_failure = e.what();
    }
    if (attempt < config_.retry.max_attempts) {
      sleeper_(config_.retry.backoff_base * (1LL << (attempt - 1)));
    }
  }
  throw TransportError("backend unavailable after " +
                       std::to_string(config_.retry.max_attempts) +
                       " attempts: " + last_failure);
}

CompletionOutcome RecordingBackend::Complete(const std::string& prompt) {
  CompletionOutcome out = inner_->Complete(prompt);
  store_.Put(prompt, out.text);
  return out;
}

}  // namespace cater
