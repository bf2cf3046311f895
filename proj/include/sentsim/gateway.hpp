#pragma once

#include <chrono>
#include <condition_variable>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace sentsim {

struct CompletionRequest {
  std::string prompt;
  int max_tokens = 64;
  double temperature = 0.0;
  std::vector<std::string> stop;
};

struct CompletionResponse {
  std::string text;
  std::string request_id;
};

struct GatewayConfig {
  std::string endpoint;  // full URL, e.g. http://127.0.0.1:8089/v1/completions
  std::string auth_env;  // env var holding the bearer token; empty = no auth
  std::size_t max_concurrency = 4;
  std::size_t max_retries = 3;
  std::chrono::milliseconds timeout{30000};
  std::chrono::milliseconds min_interval{0};
  std::chrono::milliseconds backoff_initial{250};  // doubles per retry
};

class CompletionClient {
 public:
  virtual ~CompletionClient() = default;
  virtual CompletionResponse complete(const CompletionRequest& request) = 0;
};

// FNV-1a 64-bit of the exact prompt bytes, as 16 lowercase hex digits.
// Stable across platforms; keys the replay store.
std::string prompt_hash(std::string_view prompt);

// Extracts the first decimal literal from a completion. Values in [0,1] pass
// through; (1, 1.05] clamps to 1 and [-0.05, 0) clamps to 0 with a warning on
// stderr. Anything else throws ScoreParseError.
double parse_similarity_score(const std::string& text);

// Recorded prompt -> completion mapping, persisted as line-delimited records
// (prompt_hash, response_text).
class ReplayStore {
 public:
  ReplayStore() = default;
  static ReplayStore load(const std::string& path);
  void save(const std::string& path) const;

  void record(const std::string& prompt, const std::string& response);
  std::optional<std::string> lookup(const std::string& prompt) const;
  std::optional<std::string> lookup_hash(const std::string& hash) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;  // hash -> text
  std::unordered_map<std::string, std::size_t> index_;
};

// Deterministic stand-in for the live API. A lookup miss is an error in
// strict mode and an empty completion otherwise.
class ReplayClient : public CompletionClient {
 public:
  ReplayClient(ReplayStore store, bool strict)
      : store_(std::move(store)), strict_(strict) {}

  CompletionResponse complete(const CompletionRequest& request) override;

 private:
  ReplayStore store_;
  bool strict_;
};

// Live client for an OpenAI-style completions endpoint. Retries 429/5xx and
// transport failures with exponential backoff, bounds in-flight requests, and
// spaces request starts by min_interval.
class HttpCompletionClient : public CompletionClient {
 public:
  explicit HttpCompletionClient(GatewayConfig config);
  ~HttpCompletionClient() override;

  CompletionResponse complete(const CompletionRequest& request) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace sentsim
