#pragma once

#include <array>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>

#include "factagent/errors.hpp"
#include "factagent/text.hpp"

namespace factagent {

enum class PromptKey {
  Politics,
  Phrase,
  Language,
  Commonsense,
  Standing,
  Search,
  UrlOverview,
  UrlVerdict,
  Planner,
  Checklist,
};

inline constexpr std::array<std::pair<PromptKey, std::string_view>, 10> kPromptFileNames{{
    {PromptKey::Politics, "politics.txt"},
    {PromptKey::Phrase, "phrase.txt"},
    {PromptKey::Language, "language.txt"},
    {PromptKey::Commonsense, "commonsense.txt"},
    {PromptKey::Standing, "standing.txt"},
    {PromptKey::Search, "search.txt"},
    {PromptKey::UrlOverview, "url_overview.txt"},
    {PromptKey::UrlVerdict, "url_verdict.txt"},
    {PromptKey::Planner, "planner.txt"},
    {PromptKey::Checklist, "checklist.txt"},
}};

namespace default_prompts {

inline constexpr std::string_view kPolitics =
    R"(Decide whether the following news claim concerns politics: government, elections, legislation, public policy, political figures, or partisan disputes.

News: {descriptor}

Explain your reasoning briefly, then answer on the final line with exactly one of:
ANSWER: POLITICAL
ANSWER: NOT_POLITICAL
)";

inline constexpr std::string_view kPhrase =
    R"(Examine how the following news claim is phrased.

News: {descriptor}

Check for sensational teasers, provocative or emotionally charged language, or exaggerated claims. Fake news often employs these tactics to attract attention from readers.

Describe what you observe in the phrasing, then conclude on the final line with exactly one of:
VERDICT: REAL
VERDICT: FAKE
VERDICT: UNCERTAIN
)";

inline constexpr std::string_view kLanguage =
    R"(Examine the writing quality of the following news claim.

News: {descriptor}

Check for grammar errors, wording errors, misuse of quotation marks, or words in all caps. Fake news often includes such errors to overemphasize credibility or attract readers.

Describe any problems you find, then conclude on the final line with exactly one of:
VERDICT: REAL
VERDICT: FAKE
VERDICT: UNCERTAIN
)";

inline constexpr std::string_view kCommonsense =
    R"(Assess the reasonableness of the following news claim using your general knowledge.

News: {descriptor}

Fake news may resemble gossip rather than factual reporting and could contain elements that contradict common knowledge. Judge whether the claim is plausible or conflicts with common sense.

Explain your assessment, then conclude on the final line with exactly one of:
VERDICT: REAL
VERDICT: FAKE
VERDICT: UNCERTAIN
)";

inline constexpr std::string_view kStanding =
    R"(The following news claim concerns politics. Examine its political standing.

News: {descriptor}

Detect whether the claim promotes a particular viewpoint rather than presenting objective facts. Fake political news often reinforces existing beliefs or biases held by target audiences, and may contribute to polarization by portraying political opponents in a negative light or demonizing certain groups.

Explain what standing, if any, the claim promotes, then conclude on the final line with exactly one of:
VERDICT: REAL
VERDICT: FAKE
VERDICT: UNCERTAIN
)";

inline constexpr std::string_view kSearch =
    R"(Review web coverage related to the following news claim and look for conflicting reports.

News: {descriptor}

Search results:
{evidence}

Fake news often contains unconfirmed information with little evidence to support the claims being made. Compare the claim against the coverage above: does other reporting corroborate it, contradict it, or fail to mention it?

Describe any agreement or conflict you find, then conclude on the final line with exactly one of:
VERDICT: REAL
VERDICT: FAKE
VERDICT: UNCERTAIN
)";

inline constexpr std::string_view kUrlOverview =
    R"(Give a brief overview of the web domain below: what kind of site it is, who operates it, and how credible it is generally considered to be.

Domain: {evidence}
)";

inline constexpr std::string_view kUrlVerdict =
    R"(Assess whether the following news claim originates from a credible domain.

News: {descriptor}

What is known about the source domain:
{evidence}

Fake news often originates from domains that are not credible. Weigh the overview together with the verification history, then conclude on the final line with exactly one of:
VERDICT: REAL
VERDICT: FAKE
VERDICT: UNCERTAIN
)";

inline constexpr std::string_view kPlanner =
    R"(You are planning how to verify a news claim. These verification tools are available:

{evidence}

News: {descriptor}

Choose which tools to run and in what order. Reply with a comma-separated list of tool names only: a subset of the tools above, each at most once.
)";

inline constexpr std::string_view kChecklist =
    R"(You have finished running verification tools on a news claim and must reach a final decision.

News: {descriptor}

Each line pairs a tool's checklist criterion with the observation that tool produced:
{evidence}

Weigh every observation against its criterion and summarize your reasoning. Then conclude on the final line with exactly one of:
VERDICT: REAL
VERDICT: FAKE
)";

}  // namespace default_prompts

/// Prompt templates keyed by role. Built-in defaults can be overridden per
/// file from a config directory, so operators can edit prompts without
/// rebuilding. Placeholders: `{descriptor}` and `{evidence}`.
class PromptLibrary {
 public:
  PromptLibrary() {
    texts_[PromptKey::Politics] = std::string(default_prompts::kPolitics);
    texts_[PromptKey::Phrase] = std::string(default_prompts::kPhrase);
    texts_[PromptKey::Language] = std::string(default_prompts::kLanguage);
    texts_[PromptKey::Commonsense] = std::string(default_prompts::kCommonsense);
    texts_[PromptKey::Standing] = std::string(default_prompts::kStanding);
    texts_[PromptKey::Search] = std::string(default_prompts::kSearch);
    texts_[PromptKey::UrlOverview] = std::string(default_prompts::kUrlOverview);
    texts_[PromptKey::UrlVerdict] = std::string(default_prompts::kUrlVerdict);
    texts_[PromptKey::Planner] = std::string(default_prompts::kPlanner);
    texts_[PromptKey::Checklist] = std::string(default_prompts::kChecklist);
  }

  /// Replaces defaults with any template files found in `dir`; missing files
  /// keep their defaults.
  void load_overrides(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir))
      throw ConfigError("prompt directory does not exist: " + dir.string());
    for (const auto& [key, name] : kPromptFileNames) {
      std::filesystem::path file = dir / name;
      if (!std::filesystem::exists(file)) continue;
      std::ifstream in(file);
      if (!in) throw ConfigError("cannot read prompt template: " + file.string());
      std::ostringstream buffer;
      buffer << in.rdbuf();
      texts_[key] = buffer.str();
    }
  }

  const std::string& text(PromptKey key) const { return texts_.at(key); }
  void set_text(PromptKey key, std::string value) { texts_[key] = std::move(value); }

  static std::string render(std::string_view tmpl, std::string_view descriptor,
                            std::string_view evidence) {
    std::string out(tmpl);
    text::replace_all(out, "{descriptor}", descriptor);
    text::replace_all(out, "{evidence}", evidence);
    return out;
  }

 private:
  std::map<PromptKey, std::string> texts_;
};

}  // namespace factagent
