#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "factagent/domain_store.hpp"
#include "factagent/search.hpp"
#include "factagent/tools.hpp"

namespace factagent {

inline constexpr std::string_view kNoCoverageRationale =
    "no corroborating or conflicting coverage found";

struct SearchFindings {
  std::vector<SearchResult> results;
  std::string conflict_summary;
  ToolObservation observation;
};

/// Numbered digest of search results, provider order, one line per result.
/// Undated results are kept but flagged.
inline std::string render_search_digest(const std::vector<SearchResult>& results) {
  std::string digest;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const SearchResult& r = results[i];
    digest += std::to_string(i + 1) + ". " + r.title;
    if (!r.snippet.empty()) digest += " - " + r.snippet;
    if (!r.source_url.empty()) digest += " [" + r.source_url + "]";
    digest += r.published ? " (" + r.published->to_iso() + ")" : " (undated)";
    digest += '\n';
  }
  return digest;
}

/// Conflicting-report search. The query is the verbatim claim title; when the
/// claim has a publish date the query carries it as an exclusive cutoff, and
/// dated results at or past the cutoff are dropped again client-side since
/// provider filters are best-effort. An empty result set short-circuits to an
/// inconclusive observation without any LLM call.
inline SearchFindings run_search_tool(const NewsClaim& claim, Gateway& gateway,
                                      SearchProvider& provider, const PromptLibrary& prompts,
                                      int max_results = 8) {
  SearchQuery query{claim.title, claim.publish_date, max_results};
  std::vector<SearchResult> results;
  try {
    results = provider.search(query);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw SearchTransportError(e.what());
  }
  if (query.before_date) {
    std::erase_if(results, [&](const SearchResult& r) {
      return r.published && !(*r.published < *query.before_date);
    });
  }
  if (static_cast<int>(results.size()) > max_results) results.resize(max_results);

  if (results.empty()) {
    SearchFindings findings;
    findings.conflict_summary = std::string(kNoCoverageRationale);
    findings.observation = {ToolKind::Search, Signal::Inconclusive,
                            std::string(kNoCoverageRationale),
                            std::string(kNoCoverageRationale) + "\nVERDICT: UNCERTAIN"};
    return findings;
  }

  const std::string digest = render_search_digest(results);
  const std::string user =
      PromptLibrary::render(prompts.text(PromptKey::Search), render_descriptor(claim), digest);
  auto [raw, verdict] = exchange_expecting_verdict(gateway, user);
  SearchFindings findings;
  findings.results = std::move(results);
  findings.conflict_summary = verdict.rationale;
  findings.observation = {ToolKind::Search, verdict.signal, std::move(verdict.rationale),
                          std::move(raw)};
  return findings;
}

/// Domain-credibility tool, two exchanges: first an overview of the domain
/// from model knowledge, then a verdict combining that overview with the
/// store's verification history. The overview is cached into the store.
inline ToolObservation run_url_tool(const NewsClaim& claim, Gateway& gateway, DomainStore& store,
                                    const PromptLibrary& prompts) {
  if (!claim.domain_url) throw MissingDomain("claim has no domain URL");
  const std::string& domain = *claim.domain_url;

  const std::string overview_prompt =
      PromptLibrary::render(prompts.text(PromptKey::UrlOverview), render_descriptor(claim), domain);
  const CompletionResult overview = gateway.ask(overview_prompt);

  std::string history;
  if (const auto record = store.lookup(domain)) {
    history = "verified real " + std::to_string(record->real_count) + " times, verified fake " +
              std::to_string(record->fake_count) + " times";
    if (record->last_updated) history += " (last updated " + record->last_updated->to_iso() + ")";
  } else {
    history = "no prior verification history";
  }
  store.remember_overview(domain, overview.text);

  const std::string evidence =
      "Overview: " + overview.text + "\nVerification history: " + history;
  const std::string user = PromptLibrary::render(prompts.text(PromptKey::UrlVerdict),
                                                 render_descriptor(claim), evidence);
  auto [raw, verdict] = exchange_expecting_verdict(gateway, user);
  return {ToolKind::Url, verdict.signal, std::move(verdict.rationale), std::move(raw)};
}

}  // namespace factagent
