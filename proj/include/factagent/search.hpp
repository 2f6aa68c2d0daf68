#pragma once

#include <deque>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "factagent/date.hpp"
#include "factagent/errors.hpp"

namespace factagent {

struct SearchQuery {
  std::string query_text;
  std::optional<CalendarDate> before_date;  // exclusive upper bound on publication
  int max_results = 8;
};

struct SearchResult {
  std::string title;
  std::string snippet;
  std::string source_url;
  std::optional<CalendarDate> published;
};

class SearchProvider {
 public:
  virtual ~SearchProvider() = default;
  virtual std::vector<SearchResult> search(const SearchQuery& query) = 0;
};

/// Offline provider: replays canned result batches in order (empty results
/// once exhausted) and records every query it receives. Doubles as the
/// no-network provider for scripted runs.
class FakeSearchProvider final : public SearchProvider {
 public:
  std::vector<SearchResult> search(const SearchQuery& query) override {
    std::lock_guard lock(mutex_);
    queries_.push_back(query);
    if (batches_.empty()) return {};
    std::vector<SearchResult> batch = std::move(batches_.front());
    batches_.pop_front();
    if (static_cast<int>(batch.size()) > query.max_results) batch.resize(query.max_results);
    return batch;
  }

  void push_batch(std::vector<SearchResult> results) {
    std::lock_guard lock(mutex_);
    batches_.push_back(std::move(results));
  }

  std::vector<SearchQuery> queries() const {
    std::lock_guard lock(mutex_);
    return queries_;
  }

 private:
  mutable std::mutex mutex_;
  std::deque<std::vector<SearchResult>> batches_;
  std::vector<SearchQuery> queries_;
};

}  // namespace factagent
