#pragma once

#include <chrono>
#include <mutex>
#include <string>
#include <vector>

#include "httplib.h"
#include "json.hpp"

#include "factagent/date.hpp"
#include "factagent/gateway.hpp"
#include "factagent/search.hpp"

namespace factagent {

struct UrlParts {
  std::string base;  // scheme://host[:port]
  std::string path;
};

inline UrlParts split_url(const std::string& url) {
  const std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos)
    throw ConfigError("endpoint must include a scheme: " + url);
  const std::size_t path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

/// Chat-completions HTTP client: one system+user message pair goes out, one
/// assistant message comes back. No streaming. 5xx and network failures map
/// to TransportError (retryable), 4xx to ProviderRejection.
class HttpChatProvider final : public LlmProvider {
 public:
  struct Config {
    std::string endpoint = "https://api.openai.com/v1/chat/completions";
    std::string api_key;
    std::chrono::seconds timeout{60};
    bool record_transcript = false;  // opt-in for live runs
  };

  explicit HttpChatProvider(Config config)
      : config_(std::move(config)), url_(split_url(config_.endpoint)) {}

  CompletionResult complete(const PromptRequest& request) override {
    if (config_.record_transcript) {
      std::lock_guard lock(mutex_);
      transcript_.push_back(request);
    }
    const nlohmann::json body{
        {"model", request.model_id},
        {"temperature", request.temperature},
        {"max_tokens", request.max_output_tokens},
        {"messages",
         nlohmann::json::array({{{"role", "system"}, {"content", request.system_text}},
                                {{"role", "user"}, {"content", request.user_text}}})}};

    httplib::Client client(url_.base);
    client.set_connection_timeout(config_.timeout);
    client.set_read_timeout(config_.timeout);
    httplib::Headers headers;
    if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);

    const auto start = std::chrono::steady_clock::now();
    const httplib::Result result = client.Post(url_.path, headers, body.dump(), "application/json");
    const auto latency = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - start);

    if (!result)
      throw TransportError("chat endpoint unreachable: " + httplib::to_string(result.error()));
    if (result->status >= 500)
      throw TransportError("chat endpoint returned status " + std::to_string(result->status));
    if (result->status >= 400)
      throw ProviderRejection("chat endpoint rejected the request (status " +
                                  std::to_string(result->status) + "): " +
                                  result->body.substr(0, 200),
                              result->status);
    try {
      const nlohmann::json reply = nlohmann::json::parse(result->body);
      const nlohmann::json& choice = reply.at("choices").at(0);
      CompletionResult out;
      out.text = choice.at("message").at("content").get<std::string>();
      out.truncated = choice.value("finish_reason", "") == "length";
      out.provider_latency = latency;
      if (out.text.empty() && !out.truncated)
        throw ProviderRejection("provider returned an empty completion", 422);
      return out;
    } catch (const nlohmann::json::exception& e) {
      throw ProviderRejection(std::string("malformed chat completion payload: ") + e.what(), 422);
    }
  }

  std::vector<PromptRequest> transcript() const {
    std::lock_guard lock(mutex_);
    return transcript_;
  }

 private:
  Config config_;
  UrlParts url_;
  mutable std::mutex mutex_;
  std::vector<PromptRequest> transcript_;
};

/// Web-search adapter for a SerpApi-style JSON endpoint. A date cutoff is
/// passed as a custom-range filter ending the day before `before_date`;
/// callers still re-check dated results because provider filters are
/// best-effort.
class SerpSearchProvider final : public SearchProvider {
 public:
  struct Config {
    std::string endpoint = "https://serpapi.com/search.json";
    std::string api_key;
    std::string engine = "google";
    std::chrono::seconds timeout{30};
  };

  explicit SerpSearchProvider(Config config)
      : config_(std::move(config)), url_(split_url(config_.endpoint)) {}

  std::vector<SearchResult> search(const SearchQuery& query) override {
    httplib::Params params{{"q", query.query_text},
                           {"engine", config_.engine},
                           {"num", std::to_string(query.max_results)}};
    if (!config_.api_key.empty()) params.emplace("api_key", config_.api_key);
    if (query.before_date)
      params.emplace("tbs", "cdr:1,cd_max:" + query.before_date->previous_day().to_us());

    httplib::Client client(url_.base);
    client.set_connection_timeout(config_.timeout);
    client.set_read_timeout(config_.timeout);
    const httplib::Result result = client.Get(url_.path, params, httplib::Headers{});
    if (!result)
      throw SearchTransportError("search endpoint unreachable: " +
                                 httplib::to_string(result.error()));
    if (result->status != 200)
      throw SearchTransportError("search endpoint returned status " +
                                 std::to_string(result->status));
    try {
      const nlohmann::json reply = nlohmann::json::parse(result->body);
      std::vector<SearchResult> results;
      if (!reply.contains("organic_results")) return results;
      for (const nlohmann::json& item : reply.at("organic_results")) {
        SearchResult r;
        r.title = item.value("title", "");
        r.snippet = item.value("snippet", "");
        r.source_url = item.value("link", "");
        if (item.contains("date") && item["date"].is_string()) {
          try {
            r.published = parse_publish_date(item["date"].get<std::string>());
          } catch (const ParseError&) {
            // Provider date strings come in many formats; undated is fine.
          }
        }
        results.push_back(std::move(r));
        if (static_cast<int>(results.size()) >= query.max_results) break;
      }
      return results;
    } catch (const nlohmann::json::exception& e) {
      throw SearchTransportError(std::string("malformed search payload: ") + e.what());
    }
  }

 private:
  Config config_;
  UrlParts url_;
};

}  // namespace factagent
