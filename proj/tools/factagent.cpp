// FactAgent command-line front end: verify a single claim, run a batch
// evaluation, or administer the domain-credibility store.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "factagent/factagent.hpp"
#include "factagent/http_providers.hpp"

namespace {

constexpr int kExitReal = 0;
constexpr int kExitFake = 1;
constexpr int kExitError = 2;

struct ProviderBundle {
  std::unique_ptr<factagent::LlmProvider> llm;
  std::unique_ptr<factagent::SearchProvider> search;
};

std::string env_or_empty(const char* name) {
  const char* value = std::getenv(name);
  return value ? value : "";
}

ProviderBundle make_providers(const factagent::RunConfig& cfg, bool needs_search) {
  ProviderBundle bundle;
  if (cfg.provider == "scripted") {
    bundle.llm = std::make_unique<factagent::ScriptedProvider>(
        factagent::load_script_file(cfg.script_path));
    bundle.search = std::make_unique<factagent::FakeSearchProvider>();
    return bundle;
  }
  const std::string llm_key = env_or_empty("FACTAGENT_LLM_KEY");
  if (llm_key.empty())
    throw factagent::ConfigError(
        "FACTAGENT_LLM_KEY is not set (required for --provider live)");
  factagent::HttpChatProvider::Config http;
  http.endpoint = cfg.endpoint;
  http.api_key = llm_key;
  bundle.llm = std::make_unique<factagent::HttpChatProvider>(std::move(http));

  const std::string search_key = env_or_empty("FACTAGENT_SEARCH_KEY");
  if (needs_search && search_key.empty())
    throw factagent::ConfigError(
        "FACTAGENT_SEARCH_KEY is not set (required while the search tool is enabled; "
        "pass --disable-tool search to run without it)");
  factagent::SerpSearchProvider::Config serp;
  serp.endpoint = cfg.search_endpoint;
  serp.api_key = search_key;
  bundle.search = std::make_unique<factagent::SerpSearchProvider>(std::move(serp));
  return bundle;
}

factagent::WorkflowEngine make_engine(const factagent::RunConfig& cfg, ProviderBundle& providers,
                                      factagent::DomainStore& store) {
  factagent::PromptLibrary prompts;
  if (!cfg.prompt_dir.empty()) prompts.load_overrides(cfg.prompt_dir);
  factagent::Checklist checklist;
  if (!cfg.checklist_file.empty()) checklist = factagent::Checklist::load_file(cfg.checklist_file);
  return factagent::WorkflowEngine(*providers.llm, *providers.search, store, std::move(prompts),
                                   std::move(checklist), factagent::engine_options_from(cfg));
}

void write_text_file(const std::filesystem::path& file, const std::string& content) {
  std::filesystem::create_directories(file.parent_path().empty() ? "." : file.parent_path());
  std::ofstream out(file, std::ios::trunc);
  if (!out) throw factagent::Error("cannot write " + file.string());
  out << content;
}

int run_verify(const factagent::RunConfig& cfg, const std::string& title, const std::string& url,
               const std::string& date, const std::string& id) {
  std::optional<std::string_view> domain;
  if (!url.empty()) domain = url;
  std::optional<factagent::CalendarDate> publish_date;
  if (!date.empty()) publish_date = factagent::parse_publish_date(date);
  const factagent::NewsClaim claim =
      factagent::make_claim(id.empty() ? "cli-claim" : id, title, domain, publish_date);

  const bool search_enabled = [&] {
    for (const std::string& name : cfg.disabled_tools)
      if (factagent::parse_tool_name(name) == factagent::ToolKind::Search) return false;
    return true;
  }();
  ProviderBundle providers = make_providers(cfg, search_enabled);
  factagent::DomainStore store(cfg.store_path);
  factagent::WorkflowEngine engine = make_engine(cfg, providers, store);

  const factagent::VerifyOutcome outcome = engine.verify(claim);
  std::cout << factagent::render_human_report(outcome);
  if (!cfg.out_dir.empty()) {
    const std::filesystem::path out_dir(cfg.out_dir);
    std::filesystem::create_directories(out_dir);
    write_text_file(out_dir / (claim.claim_id + ".json"),
                    factagent::verify_record(outcome).dump(2) + "\n");
  }
  return outcome.verdict.label == factagent::Veracity::Real ? kExitReal : kExitFake;
}

int run_evaluate(const factagent::RunConfig& cfg, const std::string& dataset, bool strict,
                 std::optional<int> sample_n, std::uint64_t seed) {
  const factagent::DatasetLoad load = factagent::load_dataset(dataset, strict);
  for (const std::string& warning : load.warnings) std::cerr << "warning: " << warning << "\n";
  if (load.records.empty()) throw factagent::Error("dataset has no usable records");

  std::vector<factagent::DatasetRecord> records = load.records;
  if (sample_n) {
    factagent::SamplingSpec spec;
    spec.n = static_cast<std::size_t>(*sample_n);
    spec.seed = seed;
    records = factagent::sample_test_set(records, spec);
  }

  ProviderBundle providers = make_providers(cfg, true);
  factagent::DomainStore store(cfg.store_path);
  factagent::WorkflowEngine engine = make_engine(cfg, providers, store);

  const std::filesystem::path out_dir(cfg.out_dir.empty() ? "out" : cfg.out_dir);
  factagent::EvalRunOptions run;
  run.parallelism = cfg.parallelism;
  run.traces_dir = out_dir / "traces";
  const factagent::EvaluationReport report = factagent::run_evaluation(records, engine, run);

  const std::string table = factagent::render_report_table(report);
  write_text_file(out_dir / "report.json", factagent::report_to_json(report).dump(2) + "\n");
  write_text_file(out_dir / "report.txt", table);
  std::cout << table;
  std::cout << "report: " << (out_dir / "report.json").string() << "\n";
  return kExitReal;
}

int run_db(const factagent::RunConfig& cfg, const std::string& action, const std::string& domain,
           const std::string& label) {
  factagent::DomainStore store(cfg.store_path);
  if (action == "add") {
    const factagent::Veracity veracity = factagent::normalize_label(label);
    const auto now = std::chrono::system_clock::now();
    const std::chrono::year_month_day today{std::chrono::floor<std::chrono::days>(now)};
    const factagent::CalendarDate when{static_cast<int>(today.year()),
                                       static_cast<int>(static_cast<unsigned>(today.month())),
                                       static_cast<int>(static_cast<unsigned>(today.day()))};
    const factagent::DomainRecord record = store.record_verification(domain, veracity, when);
    std::cout << record.domain << ": real_count=" << record.real_count
              << " fake_count=" << record.fake_count << "\n";
    return kExitReal;
  }
  const auto record = store.lookup(domain);
  if (!record) {
    std::cout << "no record for " << factagent::normalize_domain(domain) << "\n";
    return kExitFake;
  }
  std::cout << record->domain << ": real_count=" << record->real_count
            << " fake_count=" << record->fake_count;
  if (record->last_updated) std::cout << " last_updated=" << record->last_updated->to_iso();
  std::cout << "\n";
  if (record->llm_overview) std::cout << "overview: " << *record->llm_overview << "\n";
  return kExitReal;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"FactAgent: claim verification through an LLM tool workflow"};
  app.require_subcommand(1);

  std::optional<std::string> config_path;
  factagent::RunOverrides overrides;
  app.add_option("--config", config_path, "JSON config file (flags take precedence)");
  app.add_option("--endpoint", overrides.endpoint, "chat-completions endpoint URL");
  app.add_option("--model", overrides.model_id, "model identifier");
  app.add_option("--temperature", overrides.temperature, "sampling temperature (default 0)");
  app.add_option("--max-output-tokens", overrides.max_output_tokens, "reply token cap per call");
  app.add_option("--budget", overrides.call_budget, "LLM call budget per claim");
  app.add_option("--search-endpoint", overrides.search_endpoint, "web-search endpoint URL");
  app.add_option("--max-results", overrides.search_max_results, "search results per query");
  app.add_option("--mode", overrides.mode, "workflow mode: expert|self-designed");
  app.add_option("--strategy", overrides.strategy, "decision strategy: checklist|majority");
  app.add_option("--disable-tool", overrides.disabled_tools,
                 "remove a tool from the workflow (repeatable)");
  app.add_option("--prompt-dir", overrides.prompt_dir, "directory of prompt template overrides");
  app.add_option("--checklist", overrides.checklist_file, "checklist criteria file");
  app.add_option("--provider", overrides.provider, "llm provider: live|scripted");
  app.add_option("--script", overrides.script_path, "scripted provider reply file");
  app.add_option("--db", overrides.store_path, "domain-credibility store file");
  app.add_option("--out", overrides.out_dir, "output directory for reports and traces");
  app.add_option("--parallelism", overrides.parallelism, "concurrent claims (live runs only)");

  auto* verify = app.add_subcommand("verify", "verify one claim and print the report");
  std::string title, url, date, id;
  verify->add_option("--title", title, "claim title")->required();
  verify->add_option("--url", url, "source domain or URL");
  verify->add_option("--date", date, "publish date (MM/DD/YYYY or YYYY-MM-DD)");
  verify->add_option("--id", id, "claim identifier");

  auto* evaluate = app.add_subcommand("evaluate", "run a dataset evaluation");
  std::string dataset;
  bool strict = false;
  std::optional<int> sample_n;
  std::uint64_t seed = 0;
  evaluate->add_option("--dataset", dataset, "line-delimited JSON dataset")->required();
  evaluate->add_flag("--strict", strict, "treat malformed dataset lines as fatal");
  evaluate->add_option("--n", sample_n, "sample size (seeded, ratio-constrained)");
  evaluate->add_option("--seed", seed, "sampling seed");

  auto* db = app.add_subcommand("db", "administer the domain-credibility store");
  auto* db_add = db->add_subcommand("add", "record a verification for a domain");
  std::string add_domain, add_label;
  db_add->add_option("domain", add_domain, "domain name")->required();
  db_add->add_option("label", add_label, "real|fake")->required();
  auto* db_show = db->add_subcommand("show", "print a domain record");
  std::string show_domain;
  db_show->add_option("domain", show_domain, "domain name")->required();
  db->require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitReal : kExitError;
  }

  try {
    const factagent::RunConfig cfg = factagent::resolve_run_config(
        config_path ? std::optional<std::filesystem::path>(*config_path) : std::nullopt,
        overrides);
    factagent::validate_run_config(cfg);
    if (verify->parsed()) return run_verify(cfg, title, url, date, id);
    if (evaluate->parsed()) return run_evaluate(cfg, dataset, strict, sample_n, seed);
    if (db->parsed())
      return db_add->parsed() ? run_db(cfg, "add", add_domain, add_label)
                              : run_db(cfg, "show", show_domain, "");
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
}
