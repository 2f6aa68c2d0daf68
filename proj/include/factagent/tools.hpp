#pragma once

#include <array>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "factagent/claim.hpp"
#include "factagent/gateway.hpp"
#include "factagent/prompts.hpp"
#include "factagent/text.hpp"

namespace factagent {

enum class ToolKind { Phrase, Language, Commonsense, Standing, Search, Url };

inline constexpr std::array<ToolKind, 6> kAllTools{
    ToolKind::Phrase,   ToolKind::Language, ToolKind::Commonsense,
    ToolKind::Standing, ToolKind::Url,      ToolKind::Search,
};

constexpr std::string_view tool_name(ToolKind kind) {
  switch (kind) {
    case ToolKind::Phrase: return "phrase";
    case ToolKind::Language: return "language";
    case ToolKind::Commonsense: return "commonsense";
    case ToolKind::Standing: return "standing";
    case ToolKind::Search: return "search";
    case ToolKind::Url: return "url";
  }
  return "unknown";
}

/// One-line role summary per tool; shown to the planner when the model
/// designs its own workflow.
constexpr std::string_view tool_blurb(ToolKind kind) {
  switch (kind) {
    case ToolKind::Phrase:
      return "checks for sensational teasers, provocative or emotionally charged language, and "
             "exaggerated claims";
    case ToolKind::Language:
      return "checks for grammar errors, wording errors, misused quotation marks, and words in "
             "all caps";
    case ToolKind::Commonsense:
      return "assesses whether the claim is reasonable or contradicts common knowledge";
    case ToolKind::Standing:
      return "for political news only, checks whether the claim pushes a viewpoint rather than "
             "objective facts";
    case ToolKind::Search:
      return "searches the web for conflicting reports from other media outlets";
    case ToolKind::Url:
      return "assesses the credibility of the claim's source domain";
  }
  return "";
}

/// Tolerant tool-name lookup: case-insensitive, accepts a `_tool`/` tool`
/// suffix and stray list punctuation.
inline std::optional<ToolKind> parse_tool_name(std::string_view raw) {
  std::string key = text::to_lower(text::trim(raw));
  while (!key.empty() && (key.front() == '-' || key.front() == '*' || key.front() == '.' ||
                          key.front() == ')' || std::isdigit(static_cast<unsigned char>(key.front()))))
    key.erase(0, 1);
  key = std::string(text::trim(key));
  for (std::string_view suffix : {"_tool", " tool", "-tool"}) {
    if (key.size() > suffix.size() && key.ends_with(suffix))
      key.erase(key.size() - suffix.size());
  }
  key = std::string(text::trim(key));
  for (ToolKind kind : kAllTools)
    if (key == tool_name(kind)) return kind;
  return std::nullopt;
}

enum class Signal { SupportsReal, SupportsFake, Inconclusive };

constexpr std::string_view signal_name(Signal s) {
  switch (s) {
    case Signal::SupportsReal: return "supports-real";
    case Signal::SupportsFake: return "supports-fake";
    case Signal::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

/// One tool's output: a three-way signal plus the natural-language rationale,
/// both derived from the raw model reply.
struct ToolObservation {
  ToolKind tool = ToolKind::Phrase;
  Signal signal = Signal::Inconclusive;
  std::string rationale;
  std::string raw_output;
};

struct PoliticsFlag {
  bool is_political = false;
  std::string rationale;
};

struct ParsedVerdict {
  Signal signal = Signal::Inconclusive;
  std::string rationale;
};

/// Reply protocol: the LAST line of the form `VERDICT: REAL|FAKE|UNCERTAIN`
/// (case-insensitive) carries the signal; every other line is the rationale.
/// A verdict without any rationale is rejected.
inline ParsedVerdict parse_tool_output(const std::string& raw) {
  static const std::regex verdict_re(R"(^\s*verdict\s*:\s*(real|fake|uncertain)\s*[.!]?\s*$)",
                                     std::regex::icase);
  const std::vector<std::string> lines = text::split_lines(raw);
  int match_index = -1;
  Signal signal = Signal::Inconclusive;
  std::smatch match;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (std::regex_match(lines[i], match, verdict_re)) {
      match_index = static_cast<int>(i);
      const std::string token = text::to_lower(match[1].str());
      signal = token == "real"   ? Signal::SupportsReal
               : token == "fake" ? Signal::SupportsFake
                                 : Signal::Inconclusive;
    }
  }
  if (match_index < 0) throw UnparsableOutput(raw);
  std::string rationale;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (static_cast<int>(i) == match_index) continue;
    rationale += lines[i];
    rationale += '\n';
  }
  rationale = std::string(text::trim(rationale));
  if (rationale.empty()) throw UnparsableOutput(raw, "verdict line without any rationale");
  return {signal, rationale};
}

/// One exchange expecting the VERDICT protocol, with a single automatic
/// reprompt on a malformed reply. Returns (raw reply, parsed verdict); the
/// second failure propagates as UnparsableOutput.
inline std::pair<std::string, ParsedVerdict> exchange_expecting_verdict(
    Gateway& gateway, const std::string& user_text) {
  const CompletionResult first = gateway.ask(user_text);
  try {
    return {first.text, parse_tool_output(first.text)};
  } catch (const UnparsableOutput&) {
    const CompletionResult second = gateway.ask(
        user_text + "\n\nAnswer again ending with a line 'VERDICT: REAL|FAKE|UNCERTAIN'.");
    return {second.text, parse_tool_output(second.text)};
  }
}

inline std::optional<PoliticsFlag> try_parse_politics(const std::string& raw) {
  static const std::regex answer_re(R"(^\s*answer\s*:\s*(not[_\s-]?political|political)\s*[.!]?\s*$)",
                                    std::regex::icase);
  const std::vector<std::string> lines = text::split_lines(raw);
  int match_index = -1;
  bool political = false;
  std::smatch match;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (std::regex_match(lines[i], match, answer_re)) {
      match_index = static_cast<int>(i);
      political = text::to_lower(match[1].str()) == "political";
    }
  }
  if (match_index < 0) return std::nullopt;
  std::string rationale;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (static_cast<int>(i) == match_index) continue;
    rationale += lines[i];
    rationale += '\n';
  }
  return PoliticsFlag{political, std::string(text::trim(rationale))};
}

/// The politics gate: decides whether the Standing tool applies to the claim.
inline PoliticsFlag classify_politics(const NewsClaim& claim, Gateway& gateway,
                                      const PromptLibrary& prompts) {
  const std::string user =
      PromptLibrary::render(prompts.text(PromptKey::Politics), render_descriptor(claim), "");
  const CompletionResult first = gateway.ask(user);
  if (auto flag = try_parse_politics(first.text)) return *flag;
  const CompletionResult second = gateway.ask(
      user + "\n\nAnswer again ending with a line 'ANSWER: POLITICAL' or 'ANSWER: NOT_POLITICAL'.");
  if (auto flag = try_parse_politics(second.text)) return *flag;
  throw UnparsableOutput(second.text, "politics gate reply lacks an ANSWER line");
}

constexpr bool is_internal_tool(ToolKind kind) {
  return kind == ToolKind::Phrase || kind == ToolKind::Language ||
         kind == ToolKind::Commonsense || kind == ToolKind::Standing;
}

inline PromptKey prompt_key_for_internal(ToolKind kind) {
  switch (kind) {
    case ToolKind::Phrase: return PromptKey::Phrase;
    case ToolKind::Language: return PromptKey::Language;
    case ToolKind::Commonsense: return PromptKey::Commonsense;
    case ToolKind::Standing: return PromptKey::Standing;
    default: throw Error(std::string(tool_name(kind)) + " is not an internal tool");
  }
}

/// Runs one internal-knowledge tool: builds its prompt from the template and
/// the claim descriptor, performs one exchange (plus at most one reprompt),
/// and parses the observation.
inline ToolObservation run_internal_tool(ToolKind kind, const NewsClaim& claim, Gateway& gateway,
                                         const PromptLibrary& prompts) {
  const std::string user = PromptLibrary::render(prompts.text(prompt_key_for_internal(kind)),
                                                 render_descriptor(claim), "");
  auto [raw, verdict] = exchange_expecting_verdict(gateway, user);
  return {kind, verdict.signal, std::move(verdict.rationale), std::move(raw)};
}

}  // namespace factagent
