#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "json.hpp"

#include "factagent/workflow.hpp"

namespace factagent {

/// Confusion counts with fake as the positive class.
struct ConfusionCounts {
  long long tp_fake = 0;
  long long fp_fake = 0;
  long long fn_fake = 0;
  long long tn_fake = 0;

  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

struct MetricsCore {
  std::size_t n = 0;
  double accuracy = 0.0;
  double f1_real = 0.0;
  double f1_fake = 0.0;
  double f1_macro = 0.0;
  ConfusionCounts confusion;
};

/// Accuracy plus per-class F1 over (gold, predicted) pairs. Per-class F1 is
/// 2tp/(2tp+fp+fn) with that class as positive, 0 when the denominator is 0;
/// the headline F1 is the macro mean of the two.
inline MetricsCore compute_metrics(const std::vector<std::pair<Veracity, Veracity>>& gold_pred) {
  if (gold_pred.empty()) throw EmptyInput("compute_metrics needs at least one pair");
  ConfusionCounts c;
  for (const auto& [gold, pred] : gold_pred) {
    if (gold == Veracity::Fake)
      ++(pred == Veracity::Fake ? c.tp_fake : c.fn_fake);
    else
      ++(pred == Veracity::Fake ? c.fp_fake : c.tn_fake);
  }
  const auto f1_of = [](long long tp, long long fp, long long fn) {
    const long long denom = 2 * tp + fp + fn;
    return denom == 0 ? 0.0 : static_cast<double>(2 * tp) / static_cast<double>(denom);
  };
  MetricsCore m;
  m.n = gold_pred.size();
  m.accuracy = static_cast<double>(c.tp_fake + c.tn_fake) / static_cast<double>(m.n);
  m.f1_fake = f1_of(c.tp_fake, c.fp_fake, c.fn_fake);
  m.f1_real = f1_of(c.tn_fake, c.fn_fake, c.fp_fake);
  m.f1_macro = (m.f1_real + m.f1_fake) / 2.0;
  m.confusion = c;
  return m;
}

struct SamplingSpec {
  std::size_t n = 100;
  std::uint64_t seed = 0;
  /// Neither class may outnumber the other by more than this factor.
  double max_class_ratio = 2.0;
};

/// Seeded, reproducible subset of size min(n, pool) honoring the class-ratio
/// constraint. The shuffle is hand-rolled so identical seeds give identical
/// subsets on every platform.
inline std::vector<DatasetRecord> sample_test_set(const std::vector<DatasetRecord>& records,
                                                  const SamplingSpec& spec) {
  if (records.empty()) throw EmptyInput("sample_test_set needs a non-empty pool");
  if (spec.n == 0) throw InfeasibleConstraint("sample size must be positive");
  if (spec.max_class_ratio < 1.0)
    throw InfeasibleConstraint("max_class_ratio must be at least 1");

  std::vector<std::size_t> real_pool;
  std::vector<std::size_t> fake_pool;
  for (std::size_t i = 0; i < records.size(); ++i)
    (records[i].gold_label == Veracity::Real ? real_pool : fake_pool).push_back(i);

  const std::size_t size = std::min(spec.n, records.size());
  const auto ratio_ok = [&](std::size_t r, std::size_t f) {
    const double real = static_cast<double>(r);
    const double fake = static_cast<double>(f);
    return real <= spec.max_class_ratio * fake && fake <= spec.max_class_ratio * real;
  };

  // Pick the feasible class split closest to balanced.
  std::optional<std::size_t> best_real;
  for (std::size_t r = 0; r <= size; ++r) {
    const std::size_t f = size - r;
    if (r > real_pool.size() || f > fake_pool.size()) continue;
    if (!ratio_ok(r, f)) continue;
    if (!best_real ||
        std::llabs(static_cast<long long>(r) - static_cast<long long>(f)) <
            std::llabs(static_cast<long long>(*best_real) - static_cast<long long>(size - *best_real)))
      best_real = r;
  }
  if (!best_real)
    throw InfeasibleConstraint("pool of " + std::to_string(real_pool.size()) + " real / " +
                               std::to_string(fake_pool.size()) + " fake records cannot satisfy "
                               "the class-ratio constraint at size " + std::to_string(size));

  std::mt19937_64 rng(spec.seed);
  const auto draw = [&rng](std::vector<std::size_t>& pool, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng() % (pool.size() - i));
      std::swap(pool[i], pool[j]);
    }
    pool.resize(count);
  };
  draw(real_pool, *best_real);
  draw(fake_pool, size - *best_real);

  std::vector<std::size_t> chosen;
  chosen.reserve(size);
  chosen.insert(chosen.end(), real_pool.begin(), real_pool.end());
  chosen.insert(chosen.end(), fake_pool.begin(), fake_pool.end());
  for (std::size_t i = 0; i + 1 < chosen.size(); ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng() % (chosen.size() - i));
    std::swap(chosen[i], chosen[j]);
  }

  std::vector<DatasetRecord> sampled;
  sampled.reserve(size);
  for (std::size_t index : chosen) sampled.push_back(records[index]);
  return sampled;
}

struct DatasetLoad {
  std::vector<DatasetRecord> records;
  std::vector<std::string> warnings;
};

/// Line-delimited JSON dataset: fields title (required), label (required),
/// url, date, id, source. Malformed lines are skipped with a warning naming
/// the line, or fatal in strict mode.
inline DatasetLoad load_dataset(const std::filesystem::path& file, bool strict = false) {
  std::ifstream in(file);
  if (!in) throw Error("cannot open dataset: " + file.string());
  DatasetLoad out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    try {
      const nlohmann::json j = nlohmann::json::parse(line);
      if (!j.contains("title")) throw FormatError("missing required field \"title\"");
      if (!j.contains("label")) throw FormatError("missing required field \"label\"");
      std::string id = j.value("id", "");
      if (id.empty()) id = "line-" + std::to_string(line_no);
      std::optional<std::string_view> url;
      std::string url_storage;
      if (j.contains("url") && j["url"].is_string()) {
        url_storage = j["url"].get<std::string>();
        if (!text::trim(url_storage).empty()) url = url_storage;
      }
      std::optional<CalendarDate> date;
      if (j.contains("date") && j["date"].is_string()) {
        const std::string raw_date = j["date"].get<std::string>();
        if (!text::trim(raw_date).empty()) date = parse_publish_date(raw_date);
      }
      DatasetRecord record;
      record.claim = make_claim(std::move(id), j["title"].get<std::string>(), url, date);
      record.gold_label = normalize_label(j["label"].get<std::string>());
      record.source = parse_dataset_source(j.value("source", "other"));
      out.records.push_back(std::move(record));
    } catch (const std::exception& e) {
      const std::string where =
          file.filename().string() + ":" + std::to_string(line_no) + ": " + e.what();
      if (strict) throw FormatError(where);
      out.warnings.push_back("skipped " + where);
    }
  }
  return out;
}

/// Fraction of plans containing each tool.
inline std::map<ToolKind, double> tool_usage_frequency(const std::vector<WorkflowPlan>& plans) {
  if (plans.empty()) throw EmptyInput("tool_usage_frequency needs at least one plan");
  std::map<ToolKind, double> usage;
  for (ToolKind kind : kAllTools) {
    std::size_t hits = 0;
    for (const WorkflowPlan& plan : plans)
      if (plan.contains(kind)) ++hits;
    usage[kind] = static_cast<double>(hits) / static_cast<double>(plans.size());
  }
  return usage;
}

struct PerClaimResult {
  std::string claim_id;
  Veracity gold = Veracity::Fake;
  Veracity predicted = Veracity::Fake;
  DecisionStrategy strategy = DecisionStrategy::ChecklistSummary;
  PlanMode mode = PlanMode::Expert;
  bool failed = false;
  std::string failure;
};

struct EvaluationReport {
  MetricsCore metrics;
  std::vector<PerClaimResult> per_claim;
  std::map<ToolKind, double> tool_usage;
};

struct EvalRunOptions {
  int parallelism = 1;
  std::optional<std::filesystem::path> traces_dir;
};

/// Verifies every record through the engine, then aggregates metrics and tool
/// usage. A claim whose run fails outright counts as predicted fake with a
/// failure marker. Aggregation happens after a sort by claim_id, so reports
/// are order-stable regardless of execution interleaving.
inline EvaluationReport run_evaluation(const std::vector<DatasetRecord>& records,
                                       WorkflowEngine& engine, const EvalRunOptions& run = {}) {
  if (records.empty()) throw EmptyInput("run_evaluation needs a non-empty test set");

  struct Slot {
    PerClaimResult row;
    std::optional<WorkflowPlan> plan;
    nlohmann::json trace;
  };
  std::vector<Slot> slots(records.size());

  const auto process = [&](std::size_t i) {
    const DatasetRecord& record = records[i];
    Slot& slot = slots[i];
    slot.row.claim_id = record.claim.claim_id;
    slot.row.gold = record.gold_label;
    slot.row.strategy = engine.options().strategy;
    slot.row.mode = engine.options().mode;
    try {
      VerifyOutcome outcome = engine.verify(record.claim);
      slot.row.predicted = outcome.verdict.label;
      slot.plan = outcome.verdict.plan;
      slot.trace = verify_record(outcome);
    } catch (const Error& e) {
      slot.row.predicted = Veracity::Fake;
      slot.row.failed = true;
      slot.row.failure = e.what();
      slot.trace = {{"claim_id", record.claim.claim_id}, {"failed", true}, {"failure", e.what()}};
    }
    slot.trace["gold"] = std::string(label_name(record.gold_label));
  };

  const int workers = std::max(1, run.parallelism);
  if (workers == 1) {
    for (std::size_t i = 0; i < slots.size(); ++i) process(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < slots.size(); i = next.fetch_add(1)) process(i);
      });
    }
    for (std::thread& t : pool) t.join();
  }

  std::vector<std::size_t> order(slots.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return slots[a].row.claim_id < slots[b].row.claim_id;
  });

  EvaluationReport report;
  std::vector<std::pair<Veracity, Veracity>> pairs;
  std::vector<WorkflowPlan> plans;
  pairs.reserve(slots.size());
  for (std::size_t i : order) {
    report.per_claim.push_back(slots[i].row);
    pairs.emplace_back(slots[i].row.gold, slots[i].row.predicted);
    if (slots[i].plan) plans.push_back(*slots[i].plan);
  }
  report.metrics = compute_metrics(pairs);
  if (plans.empty()) {
    for (ToolKind kind : kAllTools) report.tool_usage[kind] = 0.0;
  } else {
    report.tool_usage = tool_usage_frequency(plans);
  }

  if (run.traces_dir) {
    std::filesystem::create_directories(*run.traces_dir);
    for (std::size_t i : order) {
      std::string name = slots[i].row.claim_id;
      for (char& c : name)
        if (c == '/' || c == '\\') c = '_';
      std::ofstream out(*run.traces_dir / (name + ".json"), std::ios::trunc);
      out << slots[i].trace.dump(2) << '\n';
    }
  }
  return report;
}

inline nlohmann::json report_to_json(const EvaluationReport& report) {
  nlohmann::json per_claim = nlohmann::json::array();
  for (const PerClaimResult& row : report.per_claim) {
    nlohmann::json j{{"claim_id", row.claim_id},
                     {"gold", std::string(label_name(row.gold))},
                     {"predicted", std::string(label_name(row.predicted))},
                     {"strategy", std::string(strategy_name(row.strategy))},
                     {"mode", std::string(mode_name(row.mode))}};
    if (row.failed) {
      j["failed"] = true;
      j["failure"] = row.failure;
    }
    per_claim.push_back(std::move(j));
  }
  nlohmann::json usage;
  for (const auto& [kind, fraction] : report.tool_usage)
    usage[std::string(tool_name(kind))] = fraction;
  return nlohmann::json{{"n", report.metrics.n},
                        {"accuracy", report.metrics.accuracy},
                        {"f1_macro", report.metrics.f1_macro},
                        {"f1_real", report.metrics.f1_real},
                        {"f1_fake", report.metrics.f1_fake},
                        {"confusion",
                         {{"tp_fake", report.metrics.confusion.tp_fake},
                          {"fp_fake", report.metrics.confusion.fp_fake},
                          {"fn_fake", report.metrics.confusion.fn_fake},
                          {"tn_fake", report.metrics.confusion.tn_fake}}},
                        {"per_claim", std::move(per_claim)},
                        {"tool_usage", std::move(usage)}};
}

inline EvaluationReport report_from_json(const nlohmann::json& j) {
  EvaluationReport report;
  report.metrics.n = j.at("n").get<std::size_t>();
  report.metrics.accuracy = j.at("accuracy").get<double>();
  report.metrics.f1_macro = j.at("f1_macro").get<double>();
  report.metrics.f1_real = j.at("f1_real").get<double>();
  report.metrics.f1_fake = j.at("f1_fake").get<double>();
  const nlohmann::json& confusion = j.at("confusion");
  report.metrics.confusion.tp_fake = confusion.at("tp_fake").get<long long>();
  report.metrics.confusion.fp_fake = confusion.at("fp_fake").get<long long>();
  report.metrics.confusion.fn_fake = confusion.at("fn_fake").get<long long>();
  report.metrics.confusion.tn_fake = confusion.at("tn_fake").get<long long>();
  for (const nlohmann::json& row : j.at("per_claim")) {
    PerClaimResult r;
    r.claim_id = row.at("claim_id").get<std::string>();
    r.gold = normalize_label(row.at("gold").get<std::string>());
    r.predicted = normalize_label(row.at("predicted").get<std::string>());
    r.strategy = parse_strategy(row.at("strategy").get<std::string>());
    r.mode = parse_mode(row.at("mode").get<std::string>());
    r.failed = row.value("failed", false);
    r.failure = row.value("failure", "");
    report.per_claim.push_back(std::move(r));
  }
  for (ToolKind kind : kAllTools) {
    const std::string name(tool_name(kind));
    if (j.at("tool_usage").contains(name))
      report.tool_usage[kind] = j.at("tool_usage").at(name).get<double>();
  }
  return report;
}

/// One-row table with the standard column set.
inline std::string render_report_table(const EvaluationReport& report) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%-8s %-8s %-8s %-8s %-6s\n%-8.4f %-8.4f %-8.4f %-8.4f %-6zu\n",
                "F1", "Acc.", "F1_real", "F1_fake", "n", report.metrics.f1_macro,
                report.metrics.accuracy, report.metrics.f1_real, report.metrics.f1_fake,
                report.metrics.n);
  return buf;
}

}  // namespace factagent
