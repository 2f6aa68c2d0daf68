// Acceptance suite: one check per shipped guarantee, one PASS/FAIL line each.
// Exit code is the number of failed criteria.

#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "factagent/factagent.hpp"
#include "support/fixture12.hpp"

namespace {

namespace fs = std::filesystem;
using namespace factagent;

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool condition, const std::string& message) {
    if (!condition && ok) {
      ok = false;
      detail = message;
    }
  }
};

fs::path repo_path(const std::string& rel) { return fs::path(FACTAGENT_REPO_DIR) / rel; }

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "factagent_acceptance" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. Deterministic end-to-end fixture run.

void criterion_deterministic_fixture(Check& check) {
  const auto t0 = std::chrono::steady_clock::now();

  const DatasetLoad load = load_dataset(repo_path("fixtures/claims.jsonl"), /*strict=*/true);
  check.require(load.records.size() == 12, "dataset must hold 12 claims");
  const std::vector<std::string> script =
      load_script_file(repo_path("fixtures/expert_checklist.script"));

  std::string previous_dump;
  for (int run = 0; run < 2; ++run) {
    const fs::path dir = scratch_dir("fixture_run_" + std::to_string(run));
    ScriptedProvider llm(script);
    FakeSearchProvider search;  // offline by construction: no sockets anywhere
    DomainStore store(dir / "domains.jsonl");
    WorkflowEngine engine(llm, search, store);
    const EvaluationReport report = run_evaluation(load.records, engine);

    check.require(llm.remaining() == 0, "script must be consumed exactly");
    const fixture12::Expected expected = fixture12::expected_checklist();
    check.require(report.metrics.n == 12, "n must be 12");
    check.require(report.metrics.confusion == expected.confusion,
                  "confusion counts must match the precomputed matrix");
    const auto close = [](double a, double b) { return std::abs(a - b) < 1e-12; };
    check.require(close(report.metrics.accuracy, expected.accuracy),
                  "accuracy " + fmt_double(report.metrics.accuracy) + " != " +
                      fmt_double(expected.accuracy));
    check.require(close(report.metrics.f1_fake, expected.f1_fake), "f1_fake mismatch");
    check.require(close(report.metrics.f1_real, expected.f1_real), "f1_real mismatch");
    check.require(close(report.metrics.f1_macro, expected.f1_macro), "f1_macro mismatch");
    for (std::size_t i = 0; i < fixture12::claims().size(); ++i)
      check.require(report.per_claim[i].predicted == fixture12::claims()[i].predicted_checklist,
                    std::string("per-claim prediction mismatch at ") + fixture12::claims()[i].id);
    for (ToolKind kind : kAllTools)
      check.require(std::abs(report.tool_usage.at(kind) - fixture12::expected_usage(kind)) < 1e-12,
                    "tool usage mismatch for " + std::string(tool_name(kind)));

    const std::string dump = report_to_json(report).dump();
    if (run > 0) check.require(dump == previous_dump, "repeated runs must be byte-identical");
    previous_dump = dump;
  }

  const auto elapsed = std::chrono::steady_clock::now() - t0;
  check.require(elapsed < std::chrono::seconds(10), "fixture run must finish in under 10 s");
}

// ---------------------------------------------------------------------------
// 2. Expert-plan routing invariants over the full grid.

void criterion_routing_grid(Check& check) {
  int cases = 0;
  for (int political = 0; political < 2; ++political) {
    for (int has_url = 0; has_url < 2; ++has_url) {
      const NewsClaim claim = has_url
          ? make_claim("g", "grid claim", std::optional<std::string_view>("grid.example"))
          : make_claim("g", "grid claim");
      const PoliticsFlag politics{political == 1, "grid"};
      for (unsigned mask = 0; mask < 64; ++mask) {
        WorkflowConfig config;
        for (std::size_t bit = 0; bit < kAllTools.size(); ++bit)
          if (mask & (1u << bit)) config.disabled.insert(kAllTools[bit]);
        WorkflowPlan plan;
        try {
          plan = plan_expert(claim, politics, config);
        } catch (const EmptyPlan&) {
          continue;
        }
        ++cases;
        const bool standing_expected =
            politics.is_political && !config.disabled.contains(ToolKind::Standing);
        const bool url_expected =
            claim.domain_url.has_value() && !config.disabled.contains(ToolKind::Url);
        check.require(plan.contains(ToolKind::Standing) == standing_expected,
                      "standing membership violated");
        check.require(plan.contains(ToolKind::Url) == url_expected, "url membership violated");
      }
    }
  }
  check.require(cases > 200, "grid must cover the full combination space");
}

// ---------------------------------------------------------------------------
// 3. Majority vote equals a brute-force tally on every signal vector.

Veracity brute_force_majority(const std::vector<Signal>& signals) {
  int fake = 0;
  int real = 0;
  for (Signal s : signals) {
    if (s == Signal::SupportsFake) ++fake;
    if (s == Signal::SupportsReal) ++real;
  }
  if (real > fake) return Veracity::Real;
  return Veracity::Fake;  // strict fake majority and every tie
}

void criterion_majority_oracle(Check& check) {
  const std::array<Signal, 3> alphabet{Signal::SupportsReal, Signal::SupportsFake,
                                       Signal::Inconclusive};
  int mismatches = 0;
  int total = 0;
  for (std::size_t width : {5u, 4u}) {
    std::size_t combos = 1;
    for (std::size_t i = 0; i < width; ++i) combos *= 3;
    for (std::size_t code = 0; code < combos; ++code) {
      std::size_t rest = code;
      std::vector<Signal> signals;
      for (std::size_t i = 0; i < width; ++i) {
        signals.push_back(alphabet[rest % 3]);
        rest /= 3;
      }
      std::vector<ToolObservation> observations;
      for (Signal s : signals) {
        const std::string why = "signal " + std::string(signal_name(s));
        observations.push_back({ToolKind::Phrase, s, why, why + "\nVERDICT: UNCERTAIN"});
      }
      ++total;
      if (decide_majority(observations).label != brute_force_majority(signals)) ++mismatches;
    }
  }
  check.require(total == 243 + 81, "must enumerate 243 + 81 vectors");
  check.require(mismatches == 0, std::to_string(mismatches) + " mismatches against the oracle");
}

// ---------------------------------------------------------------------------
// 4. compute_metrics equals a brute-force confusion-matrix oracle.

void criterion_metrics_oracle(Check& check) {
  std::mt19937_64 rng(2024);
  int checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng() % 50;
    std::vector<std::pair<Veracity, Veracity>> pairs;
    long long tp = 0, fp = 0, fn = 0, tn = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const Veracity gold = rng() % 2 ? Veracity::Fake : Veracity::Real;
      const Veracity pred = rng() % 2 ? Veracity::Fake : Veracity::Real;
      pairs.emplace_back(gold, pred);
      if (gold == Veracity::Fake && pred == Veracity::Fake) ++tp;
      if (gold == Veracity::Real && pred == Veracity::Fake) ++fp;
      if (gold == Veracity::Fake && pred == Veracity::Real) ++fn;
      if (gold == Veracity::Real && pred == Veracity::Real) ++tn;
    }
    const auto f1 = [](long long tp_c, long long fp_c, long long fn_c) {
      const double precision =
          tp_c + fp_c == 0 ? 0.0 : double(tp_c) / double(tp_c + fp_c);
      const double recall = tp_c + fn_c == 0 ? 0.0 : double(tp_c) / double(tp_c + fn_c);
      return precision + recall == 0.0 ? 0.0 : 2.0 * precision * recall / (precision + recall);
    };
    const MetricsCore m = compute_metrics(pairs);
    const double acc = double(tp + tn) / double(n);
    check.require(std::abs(m.accuracy - acc) < 1e-12, "accuracy drift");
    check.require(std::abs(m.f1_fake - f1(tp, fp, fn)) < 1e-12, "f1_fake drift");
    check.require(std::abs(m.f1_real - f1(tn, fn, fp)) < 1e-12, "f1_real drift");
    check.require(std::abs(m.f1_macro - (f1(tp, fp, fn) + f1(tn, fn, fp)) / 2.0) < 1e-12,
                  "f1_macro drift");
    check.require(m.confusion.tp_fake == tp && m.confusion.fp_fake == fp &&
                      m.confusion.fn_fake == fn && m.confusion.tn_fake == tn,
                  "confusion drift");
    ++checked;
  }
  check.require(checked == 1000, "must run 1000 random vectors");

  const MetricsCore degenerate = compute_metrics({{Veracity::Real, Veracity::Real},
                                                  {Veracity::Real, Veracity::Real}});
  check.require(degenerate.f1_fake == 0.0 && degenerate.accuracy == 1.0,
                "degenerate single-class case must use the zero-denominator rule");
}

// ---------------------------------------------------------------------------
// 5. Leakage safety: every dated claim's query carries its cutoff.

void criterion_leakage_safety(Check& check) {
  FakeSearchProvider search;
  ScriptedProvider llm;  // empty: reaching the model here would be a failure
  Gateway gateway(llm);
  PromptLibrary prompts;
  std::mt19937 rng(77);
  std::vector<CalendarDate> dates;
  for (int i = 0; i < 200; ++i) {
    const CalendarDate date{1995 + int(rng() % 30), 1 + int(rng() % 12), 1 + int(rng() % 28)};
    dates.push_back(date);
    const NewsClaim claim =
        make_claim("leak" + std::to_string(i), "dated headline " + std::to_string(i),
                   std::nullopt, date);
    run_search_tool(claim, gateway, search, prompts);
  }
  const auto queries = search.queries();
  check.require(queries.size() == 200, "expected 200 queries");
  int with_cutoff = 0;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    if (queries[i].before_date && *queries[i].before_date == dates[i]) ++with_cutoff;
  }
  check.require(with_cutoff == 200, std::to_string(200 - with_cutoff) +
                                        " queries missing or mismatching the date cutoff");
  check.require(gateway.calls_used() == 0, "empty result sets must not consume LLM calls");
}

// ---------------------------------------------------------------------------
// 6. Store durability and reader consistency.

void criterion_store_durability(Check& check) {
  const fs::path dir = scratch_dir("store");
  const fs::path file = dir / "domains.jsonl";
  std::mt19937 rng(99);
  std::map<std::string, std::pair<long long, long long>> replay;
  {
    DomainStore store(file);
    for (int i = 0; i < 500; ++i) {
      const std::string domain = "host" + std::to_string(rng() % 25) + ".example";
      const Veracity label = rng() % 2 ? Veracity::Real : Veracity::Fake;
      record_verification(store, domain, label,
                          CalendarDate{2020 + int(rng() % 5), 1 + int(rng() % 12),
                                       1 + int(rng() % 28)});
      auto& [real, fake] = replay[domain];
      (label == Veracity::Real ? real : fake) += 1;
    }
  }
  DomainStore reopened(file);
  check.require(reopened.size() == replay.size(), "record count differs after reopen");
  for (const auto& [domain, counts] : replay) {
    const auto record = reopened.lookup(domain);
    check.require(record.has_value(), "missing record for " + domain);
    if (record)
      check.require(record->real_count == counts.first && record->fake_count == counts.second,
                    "replayed counts differ for " + domain);
  }

  // Readers racing a writer never observe torn records: the writer issues
  // real/fake pairs, so a consistent snapshot has delta 0 or 1.
  std::atomic<bool> done{false};
  std::atomic<int> torn{0};
  std::vector<std::thread> readers;
  for (int r = 0; r < 4; ++r) {
    readers.emplace_back([&] {
      while (!done.load()) {
        if (const auto record = reopened.lookup("racer.example")) {
          const long long delta = record->real_count - record->fake_count;
          if (delta != 0 && delta != 1) torn.fetch_add(1);
        }
        std::this_thread::yield();  // keep the writer from starving under the rwlock
      }
    });
  }
  for (int i = 0; i < 200; ++i) {
    reopened.record_verification("racer.example", Veracity::Real, CalendarDate{2024, 1, 1});
    reopened.record_verification("racer.example", Veracity::Fake, CalendarDate{2024, 1, 1});
  }
  done.store(true);
  for (std::thread& t : readers) t.join();
  check.require(torn.load() == 0, "reader observed a torn record");
}

// ---------------------------------------------------------------------------
// 7. Self-designed plan hygiene under noisy planner replies.

void criterion_plan_hygiene(Check& check) {
  std::mt19937 rng(123);
  const std::vector<std::string> vocab{"phrase",    "language",  "commonsense", "standing",
                                       "url",       "search",    "horoscope",   "tea-leaves",
                                       "Phrase",    "URL_tool",  "search",      "astrology"};
  int produced = 0;
  for (int i = 0; i < 100; ++i) {
    const bool has_url = rng() % 2 == 0;
    const bool is_political = rng() % 2 == 0;
    const NewsClaim claim = has_url
        ? make_claim("h", "noisy claim", std::optional<std::string_view>("noisy.example"))
        : make_claim("h", "noisy claim");
    std::string reply;
    const int tokens = 2 + int(rng() % 6);
    for (int t = 0; t < tokens; ++t) {
      if (t) reply += ", ";
      reply += vocab[rng() % vocab.size()];
    }
    ScriptedProvider llm({reply});
    Gateway gateway(llm);
    SelfPlanResult result;
    try {
      result = plan_self_designed(claim, {is_political, "h"}, gateway, PromptLibrary{});
    } catch (const Error&) {
      continue;  // reply held nothing usable
    }
    ++produced;
    check.require(!result.plan.steps.empty(), "plan must be non-empty");
    std::set<ToolKind> unique(result.plan.steps.begin(), result.plan.steps.end());
    check.require(unique.size() == result.plan.steps.size(),
                  "duplicate tool in plan for reply: " + reply);
    check.require(!result.plan.contains(ToolKind::Standing) || is_political,
                  "standing kept on apolitical claim: " + reply);
    check.require(!result.plan.contains(ToolKind::Url) || has_url,
                  "url kept without a domain: " + reply);
    const std::size_t tokens_seen = split_plan_tokens(reply).size();
    check.require(result.repairs.size() == tokens_seen - result.plan.steps.size(),
                  "every dropped token must be logged: " + reply);
  }
  check.require(produced >= 60, "noise generator produced too few usable plans");
}

// ---------------------------------------------------------------------------
// 8. Tool-call accounting on the full expert workflow.

void criterion_call_accounting(Check& check) {
  const NewsClaim claim =
      make_claim("acct", "Senator announces sweeping new statute",
                 std::optional<std::string_view>("capitolwire.example"),
                 CalendarDate{2021, 6, 1});
  const std::vector<std::string> replies{
      "ANSWER: POLITICAL\nlegislation story",         // 1 politics gate
      "VERDICT: FAKE\nbreathless phrasing",           // 2 phrase
      "VERDICT: REAL\nclean writing",                 // 3 language
      "VERDICT: FAKE\nimplausible scope",             // 4 commonsense
      "VERDICT: FAKE\none-sided framing",             // 5 standing
      "partisan blog with no editorial standards",    // 6 url overview
      "VERDICT: FAKE\nlow-credibility domain",        // 7 url verdict
      "VERDICT: FAKE\nwire coverage contradicts it",  // 8 search digest
      "VERDICT: FAKE\nmost checklist items violated"  // 9 checklist summary
  };
  {
    const fs::path dir = scratch_dir("accounting");
    ScriptedProvider llm(replies);
    FakeSearchProvider search;
    search.push_batch({SearchResult{"wire story", "contradicts the claim",
                                    "https://wire.example/story", std::nullopt}});
    DomainStore store(dir / "domains.jsonl");
    WorkflowEngine engine(llm, search, store);
    const VerifyOutcome outcome = engine.verify(claim);
    check.require(outcome.llm_calls == 9,
                  "expected exactly 9 calls, saw " + std::to_string(outcome.llm_calls));
    check.require(llm.transcript().size() == 9, "provider transcript must hold 9 requests");
    check.require(llm.remaining() == 0, "script must be fully consumed");
    check.require(outcome.verdict.observations.size() == 6, "six observations expected");
  }
  {
    // budget exhaustion aborts the claim cleanly
    const fs::path dir = scratch_dir("accounting_budget");
    ScriptedProvider llm(replies);
    FakeSearchProvider search;
    DomainStore store(dir / "domains.jsonl");
    EngineOptions options;
    options.gateway.call_budget = 5;
    WorkflowEngine engine(llm, search, store, PromptLibrary{}, Checklist{}, options);
    bool aborted = false;
    try {
      engine.verify(claim);
    } catch (const BudgetExceeded&) {
      aborted = true;
    }
    check.require(aborted, "budget exhaustion must raise BudgetExceeded");
    check.require(llm.transcript().size() == 5, "no calls may follow budget exhaustion");
  }
}

// ---------------------------------------------------------------------------
// 9. Optional live smoke run, gated on credentials.

bool criterion_live_smoke(Check& check, std::string& skip_reason) {
  const char* llm_key = std::getenv("FACTAGENT_LLM_KEY");
  const char* search_key = std::getenv("FACTAGENT_SEARCH_KEY");
  const char* claims_file = std::getenv("FACTAGENT_LIVE_CLAIMS");
  if (!llm_key || !*llm_key || !search_key || !*search_key || !claims_file || !*claims_file) {
    skip_reason = "set FACTAGENT_LLM_KEY, FACTAGENT_SEARCH_KEY and FACTAGENT_LIVE_CLAIMS to run";
    return false;
  }
  const auto t0 = std::chrono::steady_clock::now();
  const DatasetLoad load = load_dataset(claims_file);
  check.require(!load.records.empty(), "live claims file is empty");
  int done = 0;
  for (const DatasetRecord& record : load.records) {
    if (done >= 10) break;
    const std::string command = std::string(FACTAGENT_CLI_PATH) + " verify --title '" +
                                record.claim.title + "'" +
                                (record.claim.domain_url ? " --url " + *record.claim.domain_url
                                                         : "") +
                                " 2>&1";
    std::string output;
    if (FILE* pipe = popen(command.c_str(), "r")) {
      char buf[4096];
      while (std::size_t got = fread(buf, 1, sizeof(buf), pipe)) output.append(buf, got);
      pclose(pipe);
    }
    check.require(output.find("=== VERDICT ===") != std::string::npos,
                  "report lacks a verdict section");
    check.require(output.find("[1/") != std::string::npos, "report lacks per-tool sections");
    ++done;
  }
  check.require(std::chrono::steady_clock::now() - t0 < std::chrono::minutes(5),
                "live smoke run exceeded 5 minutes");
  return true;
}

struct Criterion {
  int id;
  const char* name;
  std::function<void(Check&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "deterministic-fixture-evaluation", criterion_deterministic_fixture},
      {2, "expert-plan-routing-grid", criterion_routing_grid},
      {3, "majority-vote-oracle-equivalence", criterion_majority_oracle},
      {4, "metric-oracle-equivalence", criterion_metrics_oracle},
      {5, "search-date-leakage-safety", criterion_leakage_safety},
      {6, "domain-store-durability", criterion_store_durability},
      {7, "self-designed-plan-hygiene", criterion_plan_hygiene},
      {8, "expert-workflow-call-accounting", criterion_call_accounting},
  };

  int failures = 0;
  for (const Criterion& criterion : criteria) {
    Check check;
    try {
      criterion.run(check);
    } catch (const std::exception& e) {
      check.require(false, std::string("unexpected exception: ") + e.what());
    }
    if (check.ok) {
      std::printf("PASS  %d  %s\n", criterion.id, criterion.name);
    } else {
      std::printf("FAIL  %d  %s: %s\n", criterion.id, criterion.name, check.detail.c_str());
      ++failures;
    }
  }

  {
    Check check;
    std::string skip_reason;
    bool ran = false;
    try {
      ran = criterion_live_smoke(check, skip_reason);
    } catch (const std::exception& e) {
      ran = true;
      check.require(false, std::string("unexpected exception: ") + e.what());
    }
    if (!ran) {
      std::printf("SKIP  9  live-verify-smoke (%s)\n", skip_reason.c_str());
    } else if (check.ok) {
      std::printf("PASS  9  live-verify-smoke\n");
    } else {
      std::printf("FAIL  9  live-verify-smoke: %s\n", check.detail.c_str());
      ++failures;
    }
  }

  return failures;
}
