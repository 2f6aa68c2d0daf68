#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "factagent/evidence.hpp"

namespace factagent {

enum class PlanMode { Expert, SelfDesigned };
enum class DecisionStrategy { ChecklistSummary, MajorityVote };

constexpr std::string_view mode_name(PlanMode m) {
  return m == PlanMode::Expert ? "expert" : "self-designed";
}

constexpr std::string_view strategy_name(DecisionStrategy s) {
  return s == DecisionStrategy::ChecklistSummary ? "checklist" : "majority";
}

inline PlanMode parse_mode(std::string_view raw) {
  std::string key = text::to_lower(text::trim(raw));
  text::replace_all(key, "_", "-");
  if (key == "expert") return PlanMode::Expert;
  if (key == "self-designed" || key == "selfdesigned" || key == "self") return PlanMode::SelfDesigned;
  throw ConfigError("unknown workflow mode: \"" + std::string(raw) + "\" (expert|self-designed)");
}

inline DecisionStrategy parse_strategy(std::string_view raw) {
  const std::string key = text::to_lower(text::trim(raw));
  if (key == "checklist") return DecisionStrategy::ChecklistSummary;
  if (key == "majority") return DecisionStrategy::MajorityVote;
  throw ConfigError("unknown decision strategy: \"" + std::string(raw) + "\" (checklist|majority)");
}

/// Ordered, duplicate-free tool sequence for one claim.
struct WorkflowPlan {
  std::vector<ToolKind> steps;
  PlanMode mode = PlanMode::Expert;
  PoliticsFlag politics;

  bool contains(ToolKind kind) const {
    return std::find(steps.begin(), steps.end(), kind) != steps.end();
  }
};

/// Ablation switches: any tool can be removed from planning.
struct WorkflowConfig {
  std::set<ToolKind> disabled;
};

/// Per-tool criteria the final decision step compares observations against.
/// Defaults restate each tool's working assumption; a config file can replace
/// any of them (`<tool>: <criterion>` lines).
class Checklist {
 public:
  Checklist() : criteria_(default_criteria()) {}

  const std::string& criterion(ToolKind kind) const { return criteria_.at(kind); }
  void set(ToolKind kind, std::string criterion) { criteria_[kind] = std::move(criterion); }

  static std::map<ToolKind, std::string> default_criteria() {
    return {
        {ToolKind::Phrase,
         "fake news often uses sensational teasers, provocative or emotionally charged language, "
         "or exaggerated claims to attract attention"},
        {ToolKind::Language,
         "fake news often contains grammar errors, wording errors, misused quotation marks, or "
         "words in all caps to overemphasize credibility"},
        {ToolKind::Commonsense,
         "fake news may read like gossip rather than factual reporting and can contradict common "
         "knowledge"},
        {ToolKind::Standing,
         "fake political news often pushes a viewpoint instead of objective facts, reinforcing "
         "biases or portraying opponents negatively (skipped if the news is not relevant to "
         "politics)"},
        {ToolKind::Search,
         "fake news often contains unconfirmed information that other media outlets do not "
         "corroborate or actively contradict"},
        {ToolKind::Url, "fake news often originates from domains that lack credibility"},
    };
  }

  static Checklist load_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open checklist file: " + file.string());
    Checklist checklist;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const std::string_view trimmed = text::trim(line);
      if (trimmed.empty() || trimmed.front() == '#') continue;
      const std::size_t colon = trimmed.find(':');
      if (colon == std::string_view::npos)
        throw ConfigError("checklist line " + std::to_string(line_no) +
                          " is not '<tool>: <criterion>'");
      const auto kind = parse_tool_name(trimmed.substr(0, colon));
      if (!kind)
        throw ConfigError("checklist line " + std::to_string(line_no) + " names an unknown tool");
      checklist.set(*kind, std::string(text::trim(trimmed.substr(colon + 1))));
    }
    return checklist;
  }

 private:
  std::map<ToolKind, std::string> criteria_;
};

/// The structured expert workflow: phrase, language, and commonsense checks
/// always run; standing only for political claims; the URL check only when
/// the claim carries a source domain; the web search last. Disabled tools are
/// dropped.
inline WorkflowPlan plan_expert(const NewsClaim& claim, const PoliticsFlag& politics,
                                const WorkflowConfig& config = {}) {
  WorkflowPlan plan;
  plan.mode = PlanMode::Expert;
  plan.politics = politics;
  const auto add = [&](ToolKind kind) {
    if (!config.disabled.contains(kind)) plan.steps.push_back(kind);
  };
  add(ToolKind::Phrase);
  add(ToolKind::Language);
  add(ToolKind::Commonsense);
  if (politics.is_political) add(ToolKind::Standing);
  if (claim.domain_url) add(ToolKind::Url);
  add(ToolKind::Search);
  if (plan.steps.empty()) throw EmptyPlan("every workflow tool is disabled");
  return plan;
}

struct SelfPlanResult {
  WorkflowPlan plan;
  std::vector<std::string> repairs;
};

inline std::vector<std::string> split_plan_tokens(const std::string& reply) {
  std::vector<std::string> tokens;
  for (const std::string& part : text::split(reply, ",;\n")) {
    const std::string_view token = text::trim(part);
    if (!token.empty()) tokens.emplace_back(token);
  }
  return tokens;
}

inline std::string planner_roster(const WorkflowConfig& config) {
  std::string roster;
  for (ToolKind kind : kAllTools) {
    if (config.disabled.contains(kind)) continue;
    roster += "- " + std::string(tool_name(kind)) + ": " + std::string(tool_blurb(kind)) + "\n";
  }
  return roster;
}

/// Asks the model to pick its own ordered tool subset. The reply is parsed as
/// a comma/newline-separated name list; unknown names are dropped, duplicates
/// collapse to their first occurrence, and plan invariants are repaired
/// (standing requires a political claim, url requires a domain). Every repair
/// is logged.
inline SelfPlanResult plan_self_designed(const NewsClaim& claim, const PoliticsFlag& politics,
                                         Gateway& gateway, const PromptLibrary& prompts,
                                         const WorkflowConfig& config = {}) {
  const std::string user = PromptLibrary::render(prompts.text(PromptKey::Planner),
                                                 render_descriptor(claim), planner_roster(config));

  struct Parsed {
    std::vector<ToolKind> picked;
    std::vector<std::string> repairs;
  };
  const auto parse_reply = [](const std::string& reply) -> std::optional<Parsed> {
    Parsed parsed;
    bool any_recognized = false;
    for (const std::string& token : split_plan_tokens(reply)) {
      const auto kind = parse_tool_name(token);
      if (!kind) {
        parsed.repairs.push_back("dropped unknown tool name \"" + token + "\"");
        continue;
      }
      any_recognized = true;
      if (std::find(parsed.picked.begin(), parsed.picked.end(), *kind) != parsed.picked.end()) {
        parsed.repairs.push_back("dropped duplicate " + std::string(tool_name(*kind)));
        continue;
      }
      parsed.picked.push_back(*kind);
    }
    if (!any_recognized) return std::nullopt;
    return parsed;
  };

  std::optional<Parsed> parsed = parse_reply(gateway.ask(user).text);
  if (!parsed) {
    const CompletionResult second =
        gateway.ask(user + "\n\nAnswer again with only a comma-separated list of tool names.");
    parsed = parse_reply(second.text);
    if (!parsed)
      throw UnparsableOutput(second.text, "planner reply contains no recognizable tool names");
  }

  std::vector<ToolKind> steps;
  for (ToolKind kind : parsed->picked) {
    if (config.disabled.contains(kind)) {
      parsed->repairs.push_back("removed disabled tool " + std::string(tool_name(kind)));
    } else if (kind == ToolKind::Standing && !politics.is_political) {
      parsed->repairs.push_back("removed standing: claim is not political");
    } else if (kind == ToolKind::Url && !claim.domain_url) {
      parsed->repairs.push_back("removed url: claim has no domain URL");
    } else {
      steps.push_back(kind);
    }
  }
  if (steps.empty()) throw EmptyPlan("self-designed plan is empty after repairs");

  SelfPlanResult result;
  result.plan.steps = std::move(steps);
  result.plan.mode = PlanMode::SelfDesigned;
  result.plan.politics = politics;
  result.repairs = std::move(parsed->repairs);
  return result;
}

/// Everything execute() needs to dispatch one step.
struct ToolServices {
  Gateway& gateway;
  SearchProvider& search;
  DomainStore& store;
  const PromptLibrary& prompts;
  int search_max_results = 8;
};

/// Runs every step in plan order. A tool that still fails after its reprompt
/// degrades to an inconclusive observation and execution continues; only
/// budget exhaustion aborts the claim.
inline std::vector<ToolObservation> execute(const WorkflowPlan& plan, const NewsClaim& claim,
                                            ToolServices& services) {
  std::vector<ToolObservation> observations;
  observations.reserve(plan.steps.size());
  for (ToolKind step : plan.steps) {
    try {
      switch (step) {
        case ToolKind::Search:
          observations.push_back(run_search_tool(claim, services.gateway, services.search,
                                                 services.prompts, services.search_max_results)
                                     .observation);
          break;
        case ToolKind::Url:
          observations.push_back(
              run_url_tool(claim, services.gateway, services.store, services.prompts));
          break;
        default:
          observations.push_back(
              run_internal_tool(step, claim, services.gateway, services.prompts));
          break;
      }
    } catch (const BudgetExceeded&) {
      throw;
    } catch (const Error& e) {
      const std::string reason = "tool failed: " + std::string(e.what());
      observations.push_back(
          {step, Signal::Inconclusive, reason, reason + "\nVERDICT: UNCERTAIN"});
    }
  }
  return observations;
}

/// Binary verdict with the full observation trail behind it.
struct FinalVerdict {
  Veracity label = Veracity::Fake;
  std::string reasoning;
  std::vector<ToolObservation> observations;
  DecisionStrategy strategy = DecisionStrategy::ChecklistSummary;
  WorkflowPlan plan;
};

/// Tallies non-inconclusive signals. Strict majority wins; ties (including
/// all-inconclusive) resolve to fake.
inline std::pair<Veracity, std::string> majority_tally(
    const std::vector<ToolObservation>& observations) {
  int fake_votes = 0;
  int real_votes = 0;
  int inconclusive = 0;
  for (const ToolObservation& obs : observations) {
    switch (obs.signal) {
      case Signal::SupportsFake: ++fake_votes; break;
      case Signal::SupportsReal: ++real_votes; break;
      case Signal::Inconclusive: ++inconclusive; break;
    }
  }
  std::string tally = "votes: supports-fake=" + std::to_string(fake_votes) +
                      ", supports-real=" + std::to_string(real_votes) +
                      ", inconclusive=" + std::to_string(inconclusive);
  if (fake_votes > real_votes) return {Veracity::Fake, std::move(tally)};
  if (real_votes > fake_votes) return {Veracity::Real, std::move(tally)};
  tally += "; tie resolved as fake";
  return {Veracity::Fake, std::move(tally)};
}

inline FinalVerdict decide_majority(std::vector<ToolObservation> observations,
                                    WorkflowPlan plan = {}) {
  if (observations.empty())
    throw EmptyObservations("majority vote needs at least one observation");
  auto [label, tally] = majority_tally(observations);
  FinalVerdict verdict;
  verdict.label = label;
  verdict.reasoning = "majority vote over tool signals; " + tally;
  verdict.observations = std::move(observations);
  verdict.strategy = DecisionStrategy::MajorityVote;
  verdict.plan = std::move(plan);
  return verdict;
}

/// One digest line per executed step, pairing the tool's criterion with its
/// observation.
inline std::string render_checklist_evidence(const std::vector<ToolObservation>& observations,
                                             const Checklist& checklist) {
  std::string lines;
  for (const ToolObservation& obs : observations) {
    lines += "- " + std::string(tool_name(obs.tool)) +
             " | criterion: " + checklist.criterion(obs.tool) + " | observation (" +
             std::string(signal_name(obs.signal)) + "): " + text::single_line(obs.rationale) + "\n";
  }
  return lines;
}

/// Final decision via one LLM exchange over observation-criterion pairs. An
/// UNCERTAIN or malformed reply triggers one reprompt; if that also fails the
/// decision falls back to the majority vote, so a verdict is always produced.
inline FinalVerdict decide_checklist(std::vector<ToolObservation> observations,
                                     const WorkflowPlan& plan, const NewsClaim& claim,
                                     Gateway& gateway, const PromptLibrary& prompts,
                                     const Checklist& checklist) {
  if (observations.size() != plan.steps.size())
    throw Error("observations do not align with the plan");
  for (std::size_t i = 0; i < observations.size(); ++i)
    if (observations[i].tool != plan.steps[i])
      throw Error("observations do not align with the plan");

  const std::string evidence = render_checklist_evidence(observations, checklist);
  const std::string user = PromptLibrary::render(prompts.text(PromptKey::Checklist),
                                                 render_descriptor(claim), evidence);

  const auto attempt = [&](const std::string& reply) -> std::optional<ParsedVerdict> {
    try {
      ParsedVerdict verdict = parse_tool_output(reply);
      if (verdict.signal == Signal::Inconclusive) return std::nullopt;
      return verdict;
    } catch (const UnparsableOutput&) {
      return std::nullopt;
    }
  };

  std::optional<ParsedVerdict> verdict;
  try {
    verdict = attempt(gateway.ask(user).text);
    if (!verdict)
      verdict = attempt(
          gateway.ask(user + "\n\nAnswer again ending with a line 'VERDICT: REAL' or 'VERDICT: FAKE'.")
              .text);
  } catch (const BudgetExceeded&) {
    throw;
  } catch (const Error&) {
    verdict = std::nullopt;
  }

  FinalVerdict out;
  out.strategy = DecisionStrategy::ChecklistSummary;
  out.plan = plan;
  if (verdict) {
    out.label = verdict->signal == Signal::SupportsReal ? Veracity::Real : Veracity::Fake;
    out.reasoning = std::move(verdict->rationale);
  } else {
    auto [label, tally] = majority_tally(observations);
    out.label = label;
    out.reasoning = "checklist summary was inconclusive; fell back to majority vote; " + tally;
  }
  out.observations = std::move(observations);
  return out;
}

struct EngineOptions {
  PlanMode mode = PlanMode::Expert;
  DecisionStrategy strategy = DecisionStrategy::ChecklistSummary;
  WorkflowConfig workflow;
  GatewayOptions gateway;
  int search_max_results = 8;
};

struct VerifyOutcome {
  NewsClaim claim;
  FinalVerdict verdict;
  std::vector<std::string> plan_repairs;
  int llm_calls = 0;
};

/// Orchestrates one claim end to end: politics gate, planning (expert or
/// self-designed), sequential execution, final decision.
class WorkflowEngine {
 public:
  WorkflowEngine(LlmProvider& llm, SearchProvider& search, DomainStore& store,
                 PromptLibrary prompts = {}, Checklist checklist = {}, EngineOptions options = {})
      : llm_(&llm),
        search_(&search),
        store_(&store),
        prompts_(std::move(prompts)),
        checklist_(std::move(checklist)),
        options_(std::move(options)) {}

  VerifyOutcome verify(const NewsClaim& claim) {
    Gateway gateway(*llm_, options_.gateway);
    const PoliticsFlag politics = classify_politics(claim, gateway, prompts_);

    WorkflowPlan plan;
    std::vector<std::string> repairs;
    if (options_.mode == PlanMode::Expert) {
      plan = plan_expert(claim, politics, options_.workflow);
    } else {
      SelfPlanResult planned =
          plan_self_designed(claim, politics, gateway, prompts_, options_.workflow);
      plan = std::move(planned.plan);
      repairs = std::move(planned.repairs);
    }

    ToolServices services{gateway, *search_, *store_, prompts_, options_.search_max_results};
    std::vector<ToolObservation> observations = execute(plan, claim, services);

    FinalVerdict verdict =
        options_.strategy == DecisionStrategy::ChecklistSummary
            ? decide_checklist(std::move(observations), plan, claim, gateway, prompts_, checklist_)
            : decide_majority(std::move(observations), plan);

    return {claim, std::move(verdict), std::move(repairs), gateway.calls_used()};
  }

  const EngineOptions& options() const { return options_; }
  EngineOptions& options() { return options_; }
  const PromptLibrary& prompts() const { return prompts_; }
  const Checklist& checklist() const { return checklist_; }

 private:
  LlmProvider* llm_;
  SearchProvider* search_;
  DomainStore* store_;
  PromptLibrary prompts_;
  Checklist checklist_;
  EngineOptions options_;
};

/// Human-readable report: one section per executed tool, then the verdict.
inline std::string render_human_report(const VerifyOutcome& outcome) {
  const FinalVerdict& verdict = outcome.verdict;
  const WorkflowPlan& plan = verdict.plan;
  std::ostringstream out;
  out << "News: " << render_descriptor(outcome.claim) << "\n";
  out << "Politics: " << (plan.politics.is_political ? "political" : "not political");
  if (!plan.politics.rationale.empty()) out << " (" << text::single_line(plan.politics.rationale) << ")";
  out << "\n";
  out << "Workflow: " << mode_name(plan.mode) << "\n";
  for (const std::string& repair : outcome.plan_repairs) out << "Plan repair: " << repair << "\n";
  out << "\n";
  const std::size_t total = verdict.observations.size();
  for (std::size_t i = 0; i < total; ++i) {
    const ToolObservation& obs = verdict.observations[i];
    out << "[" << i + 1 << "/" << total << "] " << tool_name(obs.tool) << ": "
        << signal_name(obs.signal) << "\n";
    out << text::indent(obs.rationale, "    ") << "\n";
  }
  out << "=== VERDICT ===\n";
  out << text::to_upper(label_name(verdict.label)) << " (strategy: "
      << strategy_name(verdict.strategy) << ", llm calls: " << outcome.llm_calls << ")\n";
  out << text::indent(verdict.reasoning, "    ");
  return out.str();
}

/// Machine-readable record of one verification.
inline nlohmann::json verify_record(const VerifyOutcome& outcome) {
  const FinalVerdict& verdict = outcome.verdict;
  nlohmann::json steps = nlohmann::json::array();
  for (ToolKind step : verdict.plan.steps) steps.push_back(std::string(tool_name(step)));
  nlohmann::json observations = nlohmann::json::array();
  for (const ToolObservation& obs : verdict.observations) {
    observations.push_back({{"tool", std::string(tool_name(obs.tool))},
                            {"signal", std::string(signal_name(obs.signal))},
                            {"rationale", obs.rationale}});
  }
  nlohmann::json record{{"claim_id", outcome.claim.claim_id},
                        {"title", outcome.claim.title},
                        {"mode", std::string(mode_name(verdict.plan.mode))},
                        {"political", verdict.plan.politics.is_political},
                        {"steps", std::move(steps)},
                        {"observations", std::move(observations)},
                        {"strategy", std::string(strategy_name(verdict.strategy))},
                        {"label", std::string(label_name(verdict.label))},
                        {"reasoning", verdict.reasoning},
                        {"llm_calls", outcome.llm_calls}};
  if (!outcome.plan_repairs.empty()) record["plan_repairs"] = outcome.plan_repairs;
  return record;
}

}  // namespace factagent
