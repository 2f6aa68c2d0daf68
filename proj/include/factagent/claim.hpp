#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "factagent/date.hpp"
#include "factagent/errors.hpp"
#include "factagent/text.hpp"

namespace factagent {

enum class Veracity { Real, Fake };

constexpr std::string_view label_name(Veracity v) {
  return v == Veracity::Real ? "real" : "fake";
}

/// Maps raw dataset labels onto the binary label space. Case-insensitive and
/// hyphen/underscore tolerant; the six-way PolitiFact-style labels collapse
/// to real/fake.
inline Veracity normalize_label(std::string_view raw) {
  std::string key = text::to_lower(text::trim(raw));
  text::replace_all(key, "_", "-");
  if (key == "pants-fire" || key == "barely-true" || key == "false" || key == "fake")
    return Veracity::Fake;
  if (key == "half-true" || key == "mostly-true" || key == "true" || key == "real")
    return Veracity::Real;
  throw UnknownLabel(std::string(raw));
}

/// Lower-cases a URL or host and strips scheme, path, query, port, and a
/// leading "www.". The result is the registrable-host key used everywhere
/// a domain identifies a source.
inline std::string normalize_domain(std::string_view raw) {
  std::string_view s = text::trim(raw);
  if (std::size_t scheme = s.find("://"); scheme != std::string_view::npos)
    s.remove_prefix(scheme + 3);
  if (std::size_t cut = s.find_first_of("/?#"); cut != std::string_view::npos) s = s.substr(0, cut);
  if (std::size_t port = s.find(':'); port != std::string_view::npos) s = s.substr(0, port);
  std::string host = text::to_lower(s);
  if (host.size() > 4 && host.rfind("www.", 0) == 0) host.erase(0, 4);
  return host;
}

/// A news item reduced to title + optional source domain + optional publish
/// date; the unit of verification.
struct NewsClaim {
  std::string claim_id;
  std::string title;
  std::optional<std::string> domain_url;
  std::optional<CalendarDate> publish_date;
};

/// Validating factory: trims the title, normalizes the domain, and enforces
/// the claim invariants.
inline NewsClaim make_claim(std::string claim_id, std::string_view title,
                            std::optional<std::string_view> domain_url = {},
                            std::optional<CalendarDate> publish_date = {}) {
  NewsClaim claim;
  claim.claim_id = std::move(claim_id);
  if (claim.claim_id.empty()) throw Error("claim id must be non-empty");
  claim.title = std::string(text::trim(title));
  if (claim.title.empty()) throw Error("claim title must be non-empty");
  if (domain_url) {
    std::string host = normalize_domain(*domain_url);
    if (host.empty()) throw Error("domain URL reduces to an empty host: " + std::string(*domain_url));
    claim.domain_url = std::move(host);
  }
  if (publish_date) {
    if (!publish_date->ok()) throw Error("invalid publish date");
    claim.publish_date = *publish_date;
  }
  return claim;
}

/// Renders the claim descriptor fed to every prompt:
/// `Title: <t>, Domain URL: <u>, Publish Date: <MM/DD/YYYY>`, omitting absent
/// segments.
inline std::string render_descriptor(const NewsClaim& claim) {
  std::string out = "Title: " + claim.title;
  if (claim.domain_url) out += ", Domain URL: " + *claim.domain_url;
  if (claim.publish_date) out += ", Publish Date: " + claim.publish_date->to_us();
  return out;
}

enum class DatasetSource { PolitiFact, GossipCop, Snopes, Other };

constexpr std::string_view source_name(DatasetSource s) {
  switch (s) {
    case DatasetSource::PolitiFact: return "politifact";
    case DatasetSource::GossipCop: return "gossipcop";
    case DatasetSource::Snopes: return "snopes";
    case DatasetSource::Other: return "other";
  }
  return "other";
}

inline DatasetSource parse_dataset_source(std::string_view raw) {
  std::string key = text::to_lower(text::trim(raw));
  if (key == "politifact") return DatasetSource::PolitiFact;
  if (key == "gossipcop") return DatasetSource::GossipCop;
  if (key == "snopes") return DatasetSource::Snopes;
  return DatasetSource::Other;
}

struct DatasetRecord {
  NewsClaim claim;
  Veracity gold_label = Veracity::Fake;
  DatasetSource source = DatasetSource::Other;
};

}  // namespace factagent
