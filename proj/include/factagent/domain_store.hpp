#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "factagent/claim.hpp"
#include "factagent/date.hpp"
#include "factagent/errors.hpp"

namespace factagent {

/// One domain's verification history plus the cached model overview.
struct DomainRecord {
  std::string domain;
  long long real_count = 0;
  long long fake_count = 0;
  std::optional<CalendarDate> last_updated;
  std::optional<std::string> llm_overview;
};

/// File-backed domain-credibility store: one JSON object per line, the whole
/// file rewritten atomically (temp file + rename) on every update. Single
/// writer, many readers; readers always see a consistent snapshot.
class DomainStore {
 public:
  explicit DomainStore(std::filesystem::path file) : file_(std::move(file)) { load(); }

  std::optional<DomainRecord> lookup(std::string_view domain) const {
    std::shared_lock lock(mutex_);
    auto it = records_.find(normalize_domain(domain));
    if (it == records_.end()) return std::nullopt;
    return it->second;
  }

  DomainRecord record_verification(std::string_view domain, Veracity label,
                                   const CalendarDate& when) {
    const std::string key = normalize_domain(domain);
    if (key.empty()) throw StoreError("domain must be non-empty");
    std::unique_lock lock(mutex_);
    DomainRecord& record = records_[key];
    record.domain = key;
    if (label == Veracity::Fake)
      ++record.fake_count;
    else
      ++record.real_count;
    record.last_updated = when;
    persist_locked();
    return record;
  }

  /// Caches the latest model overview of a domain; counts are untouched.
  void remember_overview(std::string_view domain, std::string overview) {
    const std::string key = normalize_domain(domain);
    if (key.empty()) return;
    std::unique_lock lock(mutex_);
    DomainRecord& record = records_[key];
    record.domain = key;
    record.llm_overview = std::move(overview);
    persist_locked();
  }

  std::size_t size() const {
    std::shared_lock lock(mutex_);
    return records_.size();
  }

  std::vector<DomainRecord> all() const {
    std::shared_lock lock(mutex_);
    std::vector<DomainRecord> out;
    out.reserve(records_.size());
    for (const auto& [key, record] : records_) out.push_back(record);
    return out;
  }

  const std::filesystem::path& file() const { return file_; }

 private:
  void load() {
    std::ifstream in(file_);
    if (!in) return;  // fresh store
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (text::trim(line).empty()) continue;
      try {
        const nlohmann::json j = nlohmann::json::parse(line);
        DomainRecord record;
        record.domain = normalize_domain(j.at("domain").get<std::string>());
        record.real_count = j.value("real_count", 0LL);
        record.fake_count = j.value("fake_count", 0LL);
        if (j.contains("last_updated") && !j["last_updated"].is_null())
          record.last_updated = parse_publish_date(j["last_updated"].get<std::string>());
        if (j.contains("llm_overview") && !j["llm_overview"].is_null())
          record.llm_overview = j["llm_overview"].get<std::string>();
        if (record.real_count < 0 || record.fake_count < 0)
          throw StoreError("negative verification count");
        if (record.domain.empty()) throw StoreError("empty domain");
        records_[record.domain] = std::move(record);
      } catch (const std::exception& e) {
        throw StoreError("bad store record at " + file_.string() + ":" + std::to_string(line_no) +
                         ": " + e.what());
      }
    }
  }

  void persist_locked() const {
    std::filesystem::path tmp = file_;
    tmp += ".tmp";
    {
      std::ofstream out(tmp, std::ios::trunc);
      if (!out) throw StoreError("cannot write store file: " + tmp.string());
      for (const auto& [key, record] : records_) {
        nlohmann::json j{{"domain", record.domain},
                         {"real_count", record.real_count},
                         {"fake_count", record.fake_count}};
        j["last_updated"] =
            record.last_updated ? nlohmann::json(record.last_updated->to_iso()) : nlohmann::json();
        if (record.llm_overview) j["llm_overview"] = *record.llm_overview;
        out << j.dump() << '\n';
      }
      out.flush();
      if (!out) throw StoreError("failed writing store file: " + tmp.string());
    }
    std::filesystem::rename(tmp, file_);
  }

  mutable std::shared_mutex mutex_;
  std::filesystem::path file_;
  std::map<std::string, DomainRecord> records_;
};

inline DomainRecord record_verification(DomainStore& store, std::string_view domain,
                                        Veracity label, const CalendarDate& when) {
  return store.record_verification(domain, label, when);
}

}  // namespace factagent
