#pragma once

#include <chrono>
#include <deque>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "factagent/errors.hpp"

namespace factagent {

struct PromptRequest {
  std::string system_text;
  std::string user_text;
  double temperature = 0.0;
  std::string model_id;
  int max_output_tokens = 512;
};

struct CompletionResult {
  std::string text;
  std::chrono::milliseconds provider_latency{0};
  bool truncated = false;
};

enum class ErrorClass { Transport, RateLimit, Auth, Rejection, Budget, Other };

inline ErrorClass classify_error(const Error& e) {
  if (dynamic_cast<const TransportError*>(&e)) return ErrorClass::Transport;
  if (const auto* rejection = dynamic_cast<const ProviderRejection*>(&e)) {
    if (rejection->is_auth()) return ErrorClass::Auth;
    if (rejection->is_rate_limit()) return ErrorClass::RateLimit;
    return ErrorClass::Rejection;
  }
  if (dynamic_cast<const BudgetExceeded*>(&e)) return ErrorClass::Budget;
  return ErrorClass::Other;
}

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds backoff_base{250};
  std::function<bool(ErrorClass)> retryable = [](ErrorClass c) {
    return c == ErrorClass::Transport || c == ErrorClass::RateLimit;
  };

  /// Delay before the attempt following `completed_attempts` failures;
  /// doubles each time, so the schedule is non-decreasing.
  std::chrono::milliseconds backoff_delay(int completed_attempts) const {
    if (completed_attempts < 1) completed_attempts = 1;
    return backoff_base * (1LL << (completed_attempts - 1));
  }
};

/// Chat-completion access point: one system+user prompt in, one reply out.
class LlmProvider {
 public:
  virtual ~LlmProvider() = default;
  virtual CompletionResult complete(const PromptRequest& request) = 0;
};

/// Deterministic provider for tests and offline runs: replays a fixed list of
/// responses in order and records every request it sees. Internally
/// serialized, so dequeue order equals call order.
class ScriptedProvider final : public LlmProvider {
 public:
  ScriptedProvider() = default;
  explicit ScriptedProvider(std::vector<std::string> responses)
      : queue_(responses.begin(), responses.end()) {}

  CompletionResult complete(const PromptRequest& request) override {
    std::lock_guard lock(mutex_);
    transcript_.push_back(request);
    if (queue_.empty()) throw ProviderRejection("script exhausted", 409);
    CompletionResult result;
    result.text = std::move(queue_.front());
    queue_.pop_front();
    result.truncated = result.text.empty();  // empty text is only legal when truncated
    return result;
  }

  void push(std::string response) {
    std::lock_guard lock(mutex_);
    queue_.push_back(std::move(response));
  }

  std::size_t remaining() const {
    std::lock_guard lock(mutex_);
    return queue_.size();
  }

  std::vector<PromptRequest> transcript() const {
    std::lock_guard lock(mutex_);
    return transcript_;
  }

 private:
  mutable std::mutex mutex_;
  std::deque<std::string> queue_;
  std::vector<PromptRequest> transcript_;
};

// Script files are line-delimited: one response per line, `\n` escapes an
// embedded newline and `\\` a literal backslash.

inline std::string escape_script_line(std::string_view response) {
  std::string out;
  out.reserve(response.size());
  for (char c : response) {
    if (c == '\\')
      out += "\\\\";
    else if (c == '\n')
      out += "\\n";
    else
      out += c;
  }
  return out;
}

inline std::string unescape_script_line(std::string_view line) {
  std::string out;
  out.reserve(line.size());
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '\\' && i + 1 < line.size()) {
      char next = line[++i];
      if (next == 'n') {
        out += '\n';
      } else if (next == '\\') {
        out += '\\';
      } else {
        out += '\\';
        out += next;
      }
    } else {
      out += line[i];
    }
  }
  return out;
}

inline std::vector<std::string> load_script_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open script file: " + file.string());
  std::vector<std::string> responses;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    responses.push_back(unescape_script_line(line));
  }
  return responses;
}

inline void save_script_file(const std::filesystem::path& file,
                             const std::vector<std::string>& responses) {
  std::ofstream out(file, std::ios::trunc);
  if (!out) throw ConfigError("cannot write script file: " + file.string());
  for (const std::string& response : responses) out << escape_script_line(response) << '\n';
}

struct GatewayOptions {
  std::string model_id = "gpt-3.5-turbo";
  std::string system_text =
      "You are a careful fact-checking assistant. Follow the requested output format exactly.";
  double temperature = 0.0;
  int max_output_tokens = 512;
  int call_budget = 64;
  RetryPolicy retry{};
};

/// Per-claim front door to the model: stamps request defaults, enforces the
/// call budget, and applies the retry policy. Authentication rejections are
/// never retried.
class Gateway {
 public:
  explicit Gateway(LlmProvider& provider, GatewayOptions options = {})
      : provider_(&provider), options_(std::move(options)) {}

  CompletionResult complete(const PromptRequest& request) {
    if (used_ >= options_.call_budget)
      throw BudgetExceeded("llm call budget of " + std::to_string(options_.call_budget) +
                           " calls exhausted");
    ++used_;
    const RetryPolicy& policy = options_.retry;
    for (int attempt = 1;; ++attempt) {
      try {
        return provider_->complete(request);
      } catch (const Error& e) {
        const ErrorClass cls = classify_error(e);
        if (cls == ErrorClass::Auth) throw;
        if (attempt >= policy.max_attempts || !policy.retryable || !policy.retryable(cls)) throw;
        std::this_thread::sleep_for(policy.backoff_delay(attempt));
      }
    }
  }

  /// Builds a request from the gateway defaults and dispatches it.
  CompletionResult ask(std::string user_text) {
    PromptRequest request;
    request.system_text = options_.system_text;
    request.user_text = std::move(user_text);
    request.temperature = options_.temperature;
    request.model_id = options_.model_id;
    request.max_output_tokens = options_.max_output_tokens;
    return complete(request);
  }

  int calls_used() const { return used_; }
  const GatewayOptions& options() const { return options_; }

 private:
  LlmProvider* provider_;
  GatewayOptions options_;
  int used_ = 0;
};

}  // namespace factagent
