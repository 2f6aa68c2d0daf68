#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "factagent/workflow.hpp"

namespace factagent {

/// Everything one run needs. Precedence: command-line flags > config file >
/// these built-in defaults. Credentials never live here; they come from the
/// environment (FACTAGENT_LLM_KEY, FACTAGENT_SEARCH_KEY).
struct RunConfig {
  // gateway
  std::string endpoint = "https://api.openai.com/v1/chat/completions";
  std::string model_id = "gpt-3.5-turbo";
  double temperature = 0.0;
  int max_output_tokens = 512;
  int call_budget = 64;
  int retry_max_attempts = 3;
  int retry_backoff_ms = 250;

  // search
  std::string search_endpoint = "https://serpapi.com/search.json";
  int search_max_results = 8;

  // workflow
  std::string mode = "expert";
  std::string strategy = "checklist";
  std::vector<std::string> disabled_tools;
  std::string prompt_dir;
  std::string checklist_file;

  // run
  std::string provider = "live";  // live | scripted
  std::string script_path;
  std::string store_path = "domains.jsonl";
  int parallelism = 1;
  std::string out_dir;
};

/// Fields a caller may override one by one; unset members fall through to the
/// config file, then to the defaults.
struct RunOverrides {
  std::optional<std::string> endpoint, model_id, search_endpoint, mode, strategy, prompt_dir,
      checklist_file, provider, script_path, store_path, out_dir;
  std::optional<double> temperature;
  std::optional<int> max_output_tokens, call_budget, retry_max_attempts, retry_backoff_ms,
      search_max_results, parallelism;
  std::vector<std::string> disabled_tools;
};

inline void apply_config_json(RunConfig& cfg, const nlohmann::json& j) {
  const auto get_string = [&](const char* key, std::string& field) {
    if (j.contains(key)) field = j.at(key).get<std::string>();
  };
  const auto get_int = [&](const char* key, int& field) {
    if (j.contains(key)) field = j.at(key).get<int>();
  };
  static const std::set<std::string> known{
      "endpoint",        "model_id",        "temperature",       "max_output_tokens",
      "call_budget",     "retry_max_attempts", "retry_backoff_ms", "search_endpoint",
      "search_max_results", "mode",         "strategy",          "disabled_tools",
      "prompt_dir",      "checklist_file",  "provider",          "script_path",
      "store_path",      "parallelism",     "out_dir"};
  for (const auto& [key, value] : j.items())
    if (!known.contains(key)) throw ConfigError("unknown config key: \"" + key + "\"");
  get_string("endpoint", cfg.endpoint);
  get_string("model_id", cfg.model_id);
  if (j.contains("temperature")) cfg.temperature = j.at("temperature").get<double>();
  get_int("max_output_tokens", cfg.max_output_tokens);
  get_int("call_budget", cfg.call_budget);
  get_int("retry_max_attempts", cfg.retry_max_attempts);
  get_int("retry_backoff_ms", cfg.retry_backoff_ms);
  get_string("search_endpoint", cfg.search_endpoint);
  get_int("search_max_results", cfg.search_max_results);
  get_string("mode", cfg.mode);
  get_string("strategy", cfg.strategy);
  if (j.contains("disabled_tools"))
    cfg.disabled_tools = j.at("disabled_tools").get<std::vector<std::string>>();
  get_string("prompt_dir", cfg.prompt_dir);
  get_string("checklist_file", cfg.checklist_file);
  get_string("provider", cfg.provider);
  get_string("script_path", cfg.script_path);
  get_string("store_path", cfg.store_path);
  get_int("parallelism", cfg.parallelism);
  get_string("out_dir", cfg.out_dir);
}

inline nlohmann::json load_config_json(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open config file: " + file.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("malformed config file " + file.string() + ": " + e.what());
  }
}

/// Merges defaults, an optional config file, and explicit overrides into one
/// RunConfig (flags > file > defaults).
inline RunConfig resolve_run_config(const std::optional<std::filesystem::path>& config_file,
                                    const RunOverrides& overrides) {
  RunConfig cfg;
  if (config_file) apply_config_json(cfg, load_config_json(*config_file));
  const auto apply = [](auto& field, const auto& maybe) {
    if (maybe) field = *maybe;
  };
  apply(cfg.endpoint, overrides.endpoint);
  apply(cfg.model_id, overrides.model_id);
  apply(cfg.temperature, overrides.temperature);
  apply(cfg.max_output_tokens, overrides.max_output_tokens);
  apply(cfg.call_budget, overrides.call_budget);
  apply(cfg.retry_max_attempts, overrides.retry_max_attempts);
  apply(cfg.retry_backoff_ms, overrides.retry_backoff_ms);
  apply(cfg.search_endpoint, overrides.search_endpoint);
  apply(cfg.search_max_results, overrides.search_max_results);
  apply(cfg.mode, overrides.mode);
  apply(cfg.strategy, overrides.strategy);
  apply(cfg.prompt_dir, overrides.prompt_dir);
  apply(cfg.checklist_file, overrides.checklist_file);
  apply(cfg.provider, overrides.provider);
  apply(cfg.script_path, overrides.script_path);
  apply(cfg.store_path, overrides.store_path);
  apply(cfg.out_dir, overrides.out_dir);
  apply(cfg.parallelism, overrides.parallelism);
  if (!overrides.disabled_tools.empty()) cfg.disabled_tools = overrides.disabled_tools;
  return cfg;
}

/// Rejects contradictory or out-of-range settings before any provider is
/// constructed (and so before any network access).
inline void validate_run_config(const RunConfig& cfg) {
  parse_mode(cfg.mode);
  parse_strategy(cfg.strategy);
  for (const std::string& name : cfg.disabled_tools)
    if (!parse_tool_name(name)) throw ConfigError("unknown tool in disabled_tools: \"" + name + "\"");
  if (cfg.provider != "live" && cfg.provider != "scripted")
    throw ConfigError("provider must be live or scripted, got \"" + cfg.provider + "\"");
  if (cfg.provider == "scripted" && cfg.script_path.empty())
    throw ConfigError("--provider scripted requires --script <file>");
  if (cfg.provider == "live" && !cfg.script_path.empty())
    throw ConfigError("--script only applies to --provider scripted");
  if (cfg.provider == "scripted" && cfg.parallelism != 1)
    throw ConfigError("scripted runs replay a strict response order; parallelism must be 1");
  if (cfg.temperature < 0.0 || cfg.temperature > 2.0)
    throw ConfigError("temperature must be in [0, 2]");
  if (cfg.max_output_tokens < 1) throw ConfigError("max_output_tokens must be positive");
  if (cfg.call_budget < 1) throw ConfigError("call_budget must be positive");
  if (cfg.retry_max_attempts < 1) throw ConfigError("retry_max_attempts must be at least 1");
  if (cfg.search_max_results < 1) throw ConfigError("search_max_results must be positive");
  if (cfg.parallelism < 1) throw ConfigError("parallelism must be at least 1");
  if (cfg.store_path.empty()) throw ConfigError("store_path must be set");
}

inline EngineOptions engine_options_from(const RunConfig& cfg) {
  EngineOptions options;
  options.mode = parse_mode(cfg.mode);
  options.strategy = parse_strategy(cfg.strategy);
  for (const std::string& name : cfg.disabled_tools) {
    const auto kind = parse_tool_name(name);
    if (!kind) throw ConfigError("unknown tool in disabled_tools: \"" + name + "\"");
    options.workflow.disabled.insert(*kind);
  }
  options.gateway.model_id = cfg.model_id;
  options.gateway.temperature = cfg.temperature;
  options.gateway.max_output_tokens = cfg.max_output_tokens;
  options.gateway.call_budget = cfg.call_budget;
  options.gateway.retry.max_attempts = cfg.retry_max_attempts;
  options.gateway.retry.backoff_base = std::chrono::milliseconds(cfg.retry_backoff_ms);
  options.search_max_results = cfg.search_max_results;
  return options;
}

}  // namespace factagent
