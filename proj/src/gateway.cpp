#include "sentsim/gateway.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "sentsim/error.hpp"

namespace sentsim {
namespace {

using nlohmann::json;

struct ParsedUrl {
  std::string base;  // scheme://host[:port]
  std::string path;  // leading '/', defaults to "/"
};

ParsedUrl parse_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigError("endpoint URL missing scheme: " + url);
  }
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

bool is_retryable_status(int status) {
  return status == 429 || (status >= 500 && status < 600);
}

std::optional<std::string> find_first_decimal_literal(const std::string& s) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    std::size_t j = i;
    if (s[j] == '+' || s[j] == '-') ++j;
    std::size_t digits_begin = j;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
    bool any_digit = j > digits_begin;
    if (j < s.size() && s[j] == '.') {
      std::size_t k = j + 1;
      while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) {
        ++k;
      }
      if (k > j + 1) {
        any_digit = true;
        j = k;
      }
    }
    if (any_digit) return s.substr(i, j - i);
    // skip past whatever we just rejected so signs inside words don't loop
    i = j > i ? j - 1 : i;
  }
  return std::nullopt;
}

}  // namespace

std::string prompt_hash(std::string_view prompt) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : prompt) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return std::string(buf);
}

double parse_similarity_score(const std::string& text) {
  const auto literal = find_first_decimal_literal(text);
  if (!literal) {
    throw ScoreParseError("no decimal literal in completion: '" + text + "'");
  }
  const double value = std::strtod(literal->c_str(), nullptr);
  if (value >= 0.0 && value <= 1.0) return value;
  if (value > 1.0 && value <= 1.05) {
    std::fprintf(stderr, "warning: clamping similarity score %s to 1.0\n",
                 literal->c_str());
    return 1.0;
  }
  if (value < 0.0 && value >= -0.05) {
    std::fprintf(stderr, "warning: clamping similarity score %s to 0.0\n",
                 literal->c_str());
    return 0.0;
  }
  throw ScoreParseError("similarity score out of band: '" + *literal + "'");
}

ReplayStore ReplayStore::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open replay fixture: " + path);
  ReplayStore store;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    json rec;
    try {
      rec = json::parse(line);
      const auto hash = rec.at("hash").get<std::string>();
      const auto text = rec.at("text").get<std::string>();
      auto it = store.index_.find(hash);
      if (it != store.index_.end()) {
        store.entries_[it->second].second = text;
      } else {
        store.index_[hash] = store.entries_.size();
        store.entries_.emplace_back(hash, text);
      }
    } catch (const json::exception& ex) {
      throw FormatError("corrupt replay record at " + path + ":" +
                        std::to_string(line_no) + ": " + ex.what());
    }
  }
  return store;
}

void ReplayStore::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  for (const auto& [hash, text] : entries_) {
    out << json{{"hash", hash}, {"text", text}}.dump() << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

void ReplayStore::record(const std::string& prompt,
                         const std::string& response) {
  const std::string hash = prompt_hash(prompt);
  auto it = index_.find(hash);
  if (it != index_.end()) {
    entries_[it->second].second = response;
    return;
  }
  index_[hash] = entries_.size();
  entries_.emplace_back(hash, response);
}

std::optional<std::string> ReplayStore::lookup(
    const std::string& prompt) const {
  return lookup_hash(prompt_hash(prompt));
}

std::optional<std::string> ReplayStore::lookup_hash(
    const std::string& hash) const {
  auto it = index_.find(hash);
  if (it == index_.end()) return std::nullopt;
  return entries_[it->second].second;
}

CompletionResponse ReplayClient::complete(const CompletionRequest& request) {
  if (request.prompt.empty()) throw Error("complete: empty prompt");
  const std::string hash = prompt_hash(request.prompt);
  const auto hit = store_.lookup_hash(hash);
  if (!hit) {
    if (strict_) {
      throw ReplayMissError("no replay entry for prompt hash " + hash);
    }
    std::fprintf(stderr, "warning: replay miss for prompt hash %s\n",
                 hash.c_str());
    return {"", "replay-miss-" + hash};
  }
  return {*hit, "replay-" + hash};
}

struct HttpCompletionClient::Impl {
  GatewayConfig config;
  ParsedUrl url;
  std::string auth_token;

  std::mutex gate_mutex;
  std::condition_variable gate_cv;
  std::size_t in_flight = 0;

  std::mutex schedule_mutex;
  std::chrono::steady_clock::time_point next_allowed_send =
      std::chrono::steady_clock::now();

  void acquire_slot() {
    std::unique_lock lock(gate_mutex);
    gate_cv.wait(lock, [&] { return in_flight < config.max_concurrency; });
    ++in_flight;
  }

  void release_slot() {
    {
      std::lock_guard lock(gate_mutex);
      --in_flight;
    }
    gate_cv.notify_one();
  }

  // Claims the next send slot and sleeps until it arrives.
  void pace() {
    if (config.min_interval.count() <= 0) return;
    std::chrono::steady_clock::time_point my_slot;
    {
      std::lock_guard lock(schedule_mutex);
      const auto now = std::chrono::steady_clock::now();
      my_slot = std::max(now, next_allowed_send);
      next_allowed_send = my_slot + config.min_interval;
    }
    std::this_thread::sleep_until(my_slot);
  }
};

HttpCompletionClient::HttpCompletionClient(GatewayConfig config)
    : impl_(std::make_unique<Impl>()) {
  if (config.max_concurrency < 1) {
    throw ConfigError("gateway concurrency must be >= 1");
  }
  if (config.endpoint.empty()) {
    throw ConfigError("gateway endpoint is not configured");
  }
  impl_->url = parse_url(config.endpoint);
  if (!config.auth_env.empty()) {
    const char* token = std::getenv(config.auth_env.c_str());
    if (token == nullptr || *token == '\0') {
      throw ConfigError("auth token environment variable '" + config.auth_env +
                        "' is not set");
    }
    impl_->auth_token = token;
  }
  impl_->config = std::move(config);
}

HttpCompletionClient::~HttpCompletionClient() = default;

CompletionResponse HttpCompletionClient::complete(
    const CompletionRequest& request) {
  if (request.prompt.empty()) throw Error("complete: empty prompt");
  if (request.max_tokens < 1) throw Error("complete: max_tokens must be >= 1");

  json body;
  body["prompt"] = request.prompt;
  body["max_tokens"] = request.max_tokens;
  body["temperature"] = request.temperature;
  if (!request.stop.empty()) body["stop"] = request.stop;
  const std::string payload = body.dump();

  const auto& cfg = impl_->config;
  std::string last_failure = "no attempt made";

  for (std::size_t attempt = 0; attempt <= cfg.max_retries; ++attempt) {
    if (attempt > 0) {
      const auto delay = cfg.backoff_initial * (1ll << (attempt - 1));
      std::this_thread::sleep_for(delay);
    }

    impl_->acquire_slot();
    impl_->pace();

    httplib::Client client(impl_->url.base);
    client.set_connection_timeout(cfg.timeout);
    client.set_read_timeout(cfg.timeout);
    client.set_write_timeout(cfg.timeout);
    httplib::Headers headers;
    if (!impl_->auth_token.empty()) {
      headers.emplace("Authorization", "Bearer " + impl_->auth_token);
    }
    auto result = client.Post(impl_->url.path, headers, payload,
                              "application/json");
    impl_->release_slot();

    if (!result) {
      last_failure = "transport error: " + httplib::to_string(result.error());
      continue;  // timeouts and connection failures are retryable
    }
    const int status = result->status;
    if (status >= 200 && status < 300) {
      json parsed;
      try {
        parsed = json::parse(result->body);
        const auto& choices = parsed.at("choices");
        if (choices.empty()) throw GatewayError("response has no choices");
        CompletionResponse response;
        response.text = choices.at(0).at("text").get<std::string>();
        response.request_id = parsed.value("id", "");
        return response;
      } catch (const json::exception& ex) {
        throw GatewayError(std::string("unparseable completion response: ") +
                           ex.what());
      }
    }
    if (status == 401 || status == 403) {
      throw GatewayError("authentication failed (HTTP " +
                         std::to_string(status) + ")");
    }
    if (!is_retryable_status(status)) {
      throw GatewayError("non-retryable HTTP " + std::to_string(status) +
                         " from " + cfg.endpoint);
    }
    last_failure = "HTTP " + std::to_string(status);
  }
  throw GatewayError("exhausted " + std::to_string(cfg.max_retries) +
                     " retries against " + cfg.endpoint + "; last failure: " +
                     last_failure);
}

}  // namespace sentsim
