// narrametric: command-line front end for the narrativity metrics library.
//
// Exit codes: 0 success, 1 input error, 2 provider error, 3 too many failed
// records in a benchmark run.

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "narrametric/config.hpp"
#include "narrametric/corpus.hpp"
#include "narrametric/decay_fit.hpp"
#include "narrametric/error.hpp"
#include "narrametric/narrativity.hpp"
#include "narrametric/perturbations.hpp"
#include "narrametric/reports.hpp"

namespace nm = narrametric;

namespace {

constexpr int kExitInput = 1;
constexpr int kExitProvider = 2;
constexpr int kExitPartial = 3;

// Flags shared by every subcommand that talks to a scorer.
struct ProviderFlags {
  std::string config;
  std::string provider;
  std::string endpoint;
  std::string script;
  std::string cache_dir;
  bool no_cache = false;
  int shuffles = 0;
  std::uint64_t seed = 0;
  bool single_shuffle = false;
  int max_inflight = 0;

  CLI::Option* provider_opt = nullptr;
  CLI::Option* endpoint_opt = nullptr;
  CLI::Option* script_opt = nullptr;
  CLI::Option* cache_dir_opt = nullptr;
  CLI::Option* shuffles_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* inflight_opt = nullptr;
};

void add_provider_flags(CLI::App* cmd, ProviderFlags& f, bool evaluation) {
  cmd->add_option("--config", f.config, "JSON config file")->check(CLI::ExistingFile);
  f.provider_opt = cmd->add_option("--provider", f.provider, "Scorer: http, scripted or mock")
                       ->check(CLI::IsMember({"http", "scripted", "mock"}));
  f.endpoint_opt = cmd->add_option("--endpoint", f.endpoint, "Sidecar base URL (or NARRAMETRIC_ENDPOINT)");
  f.script_opt = cmd->add_option("--script", f.script, "Scripted responses (JSON)")->check(CLI::ExistingFile);
  f.cache_dir_opt = cmd->add_option("--cache-dir", f.cache_dir, "Score cache directory");
  cmd->add_flag("--no-cache", f.no_cache, "Disable the score cache");
  if (evaluation) {
    f.shuffles_opt = cmd->add_option("--shuffles", f.shuffles, "Shuffles averaged for CSR")->check(CLI::PositiveNumber);
    cmd->add_flag("--single-shuffle", f.single_shuffle, "One shuffle with --seed instead of an average");
  }
  f.seed_opt = cmd->add_option("--seed", f.seed, "Shuffle seed");
}

nm::Settings assemble_settings(const ProviderFlags& f) {
  nm::Settings s = f.config.empty() ? nm::Settings{} : nm::load_settings(f.config);
  nm::apply_environment(s);
  if (f.provider_opt != nullptr && f.provider_opt->count() > 0) s.provider = f.provider;
  if (f.endpoint_opt != nullptr && f.endpoint_opt->count() > 0) s.endpoint = f.endpoint;
  if (f.script_opt != nullptr && f.script_opt->count() > 0) s.script = f.script;
  if (f.cache_dir_opt != nullptr && f.cache_dir_opt->count() > 0) s.cache_dir = f.cache_dir;
  if (f.no_cache) s.cache_enabled = false;
  if (f.shuffles_opt != nullptr && f.shuffles_opt->count() > 0) s.evaluation.shuffles = f.shuffles;
  if (f.seed_opt != nullptr && f.seed_opt->count() > 0) s.evaluation.seed = f.seed;
  if (f.single_shuffle) s.evaluation.single_shuffle = true;
  if (f.inflight_opt != nullptr && f.inflight_opt->count() > 0) s.max_inflight = f.max_inflight;
  if (s.provider == "scripted" && !s.script) throw nm::InputError("the scripted provider needs --script");
  return s;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw nm::InputError("cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string text_from(const std::string& text, const std::string& file) {
  return file.empty() ? text : read_file(file);
}

std::string format_value(const nm::MetricValue& v) {
  if (!v) return "undefined (" + v.reason() + ")";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", *v);
  return buf;
}

nlohmann::ordered_json value_json(const nm::MetricValue& v) {
  nlohmann::ordered_json out;
  if (v) {
    out["value"] = *v;
  } else {
    out["value"] = nullptr;
    out["reason"] = v.reason();
  }
  return out;
}

nlohmann::ordered_json fit_json(const nm::OrUndefined<nm::DecayFit>& fit) {
  if (!fit) return {{"defined", false}, {"reason", fit.reason()}};
  return {{"defined", true},          {"A", fit->amplitude},         {"b", fit->decay},
          {"C", fit->baseline},       {"r", fit->rate},              {"r_squared", fit->r_squared},
          {"rmse", fit->rmse}};
}

void print_fit(const nm::OrUndefined<nm::DecayFit>& fit) {
  if (!fit) {
    std::cout << "fit: undefined (" << fit.reason() << ")\n";
    return;
  }
  std::printf("fit: A=%.6g b=%.6g C=%.6g r=%.6g R2=%.6f RMSE=%.6g\n", fit->amplitude, fit->decay, fit->baseline,
              fit->rate, fit->r_squared, fit->rmse);
}

int run_score(const std::string& text, const ProviderFlags& flags, bool json) {
  const nm::Settings settings = assemble_settings(flags);
  const auto provider = nm::make_provider(settings);
  const auto resources = nm::LanguageResources::load(settings.resources);
  const nm::TextEvaluation eval = nm::evaluate_text(text, *provider, resources, settings.evaluation);

  if (json) {
    nlohmann::ordered_json doc;
    nlohmann::ordered_json metrics;
    for (const nm::MetricInfo& info : nm::all_metrics()) metrics[std::string(info.name)] = value_json(eval.metrics[info.id]);
    doc["metrics"] = metrics;
    doc["sentences"] = eval.sentence_count;
    doc["words"] = eval.surface.word_count;
    doc["ppl"] = eval.ppl;
    doc["shuffled_ppl"] = eval.shuffled_ppl ? nlohmann::ordered_json(*eval.shuffled_ppl) : nlohmann::ordered_json();
    doc["trajectory"] = eval.trajectory;
    doc["fit"] = fit_json(eval.fit);
    doc["ratios"] = {{"cr", eval.surface.cr}, {"cer", eval.surface.cer}, {"ttr", eval.surface.ttr}, {"vr", eval.surface.vr}};
    std::cout << doc.dump(2) << "\n";
    return 0;
  }
  std::cout << "sentences: " << eval.sentence_count << ", words: " << eval.surface.word_count << "\n";
  for (const nm::MetricInfo& info : nm::all_metrics()) {
    std::printf("%-6s %s %s\n", std::string(info.label).c_str(),
                info.direction == nm::Direction::kHigherIsBetter ? "up  " : "down",
                format_value(eval.metrics[info.id]).c_str());
  }
  std::cout << "trajectory:";
  for (double v : eval.trajectory) std::printf(" %.4g", v);
  std::cout << "\n";
  print_fit(eval.fit);
  return 0;
}

int run_benchmark(const std::string& corpus_path, const std::string& out_dir, const ProviderFlags& flags,
                  std::optional<double> max_failure_rate, std::optional<double> alpha) {
  nm::Settings settings = assemble_settings(flags);
  if (max_failure_rate) settings.max_failure_rate = *max_failure_rate;
  if (alpha) settings.alpha = *alpha;
  const auto corpus = nm::load_corpus(corpus_path);
  const auto provider = nm::make_provider(settings);
  const auto resources = nm::LanguageResources::load(settings.resources);
  nm::BenchmarkConfig config;
  config.evaluation = settings.evaluation;
  config.max_inflight = settings.max_inflight;
  config.max_failure_rate = settings.max_failure_rate;
  const nm::BenchmarkResult result = nm::run_benchmark(corpus, *provider, resources, config);
  for (const auto& o : result.outcomes) {
    if (!o.evaluation) {
      spdlog::warn("{}/{}/{}: {}", o.record.dataset, o.record.method, o.record.instance_id, o.error);
    }
  }
  nm::emit_reports(result, out_dir, settings.alpha);
  std::cout << "evaluated " << corpus.size() - result.failure_count() << " of " << corpus.size()
            << " records; reports written to " << out_dir << "\n";
  return 0;
}

int run_perturb(const std::string& text, const ProviderFlags& flags, const std::string& format,
                const std::string& out_dir, bool trajectories) {
  const nm::Settings settings = assemble_settings(flags);
  const auto provider = nm::make_provider(settings);
  const auto resources = nm::LanguageResources::load(settings.resources);
  const auto report =
      nm::perturbation_report(text, *provider, settings.evaluation.seed, resources.splitter, trajectories);
  if (!out_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    nm::write_text_file(std::filesystem::path(out_dir) / "perturbation.json", nm::to_json(report));
    nm::write_text_file(std::filesystem::path(out_dir) / "perturbation.csv", nm::to_csv(report));
  }
  std::cout << (format == "csv" ? nm::to_csv(report) : nm::to_json(report));
  return 0;
}

int run_stats(const std::string& results_path, const std::string& out_dir, double alpha) {
  const nm::ResultsTable table = nm::load_results(results_path);
  const nm::StatsReport stats = nm::compute_stats(table, alpha);
  if (!out_dir.empty()) nm::write_stats_reports(stats, out_dir);
  std::cout << nm::friedman_markdown(stats) << "\n" << nm::nemenyi_markdown(stats);
  return 0;
}

int run_fit(const std::string& trajectory) {
  std::vector<double> values;
  std::stringstream in(trajectory);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw nm::InputError("not a number in trajectory: \"" + item + "\"");
    }
  }
  print_fit(nm::fit_decay(values));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_default_logger(spdlog::stderr_color_st("narrametric"));

  CLI::App app{"Narrativity metrics for natural-language explanations"};
  app.require_subcommand(1);

  ProviderFlags score_flags;
  std::string score_text, score_file;
  bool score_json = false;
  auto* score = app.add_subcommand("score", "Compute all metrics for one text");
  auto* text_opt = score->add_option("--text", score_text, "Text to score");
  auto* file_opt = score->add_option("--file", score_file, "File holding the text")->check(CLI::ExistingFile);
  text_opt->excludes(file_opt);
  score->add_flag("--json", score_json, "Print JSON");
  add_provider_flags(score, score_flags, true);

  ProviderFlags bench_flags;
  std::string corpus_path, bench_out;
  std::optional<double> max_failure_rate, bench_alpha;
  auto* bench = app.add_subcommand("benchmark", "Evaluate a corpus and write reports");
  bench->add_option("--corpus", corpus_path, "JSON Lines corpus")->required()->check(CLI::ExistingFile);
  bench->add_option("--out", bench_out, "Output directory")->required();
  bench->add_option("--max-failure-rate", max_failure_rate, "Allowed share of failed records")
      ->check(CLI::Range(0.0, 1.0));
  bench->add_option("--alpha", bench_alpha, "Significance level")->check(CLI::Range(0.0, 1.0));
  add_provider_flags(bench, bench_flags, true);
  bench_flags.inflight_opt =
      bench->add_option("--max-inflight", bench_flags.max_inflight, "Concurrent scorer requests")
          ->check(CLI::PositiveNumber);

  ProviderFlags perturb_flags;
  std::string perturb_text, perturb_file, perturb_format = "json", perturb_out;
  bool perturb_trajectories = false;
  auto* perturb = app.add_subcommand("perturb", "Shuffle, reverse and leave-one-out perplexity changes");
  auto* ptext = perturb->add_option("--text", perturb_text, "Text");
  auto* pfile = perturb->add_option("--file", perturb_file, "File holding the text")->check(CLI::ExistingFile);
  ptext->excludes(pfile);
  perturb->add_option("--format", perturb_format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  perturb->add_option("--out", perturb_out, "Also write perturbation.json and perturbation.csv here");
  perturb->add_flag("--trajectories", perturb_trajectories, "Include cumulative trajectories");
  add_provider_flags(perturb, perturb_flags, false);

  std::string results_path, stats_out;
  double stats_alpha = 0.05;
  auto* stats = app.add_subcommand("stats", "Friedman and Nemenyi tables from a results CSV");
  stats->add_option("--results", results_path, "results.csv")->required()->check(CLI::ExistingFile);
  stats->add_option("--out", stats_out, "Output directory");
  stats->add_option("--alpha", stats_alpha, "Significance level")->check(CLI::Range(0.0, 1.0));

  std::string trajectory;
  auto* fit = app.add_subcommand("fit", "Fit the shifted exponential to a perplexity trajectory");
  fit->add_option("--trajectory", trajectory, "Comma-separated values")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*score) {
      if (score_text.empty() && score_file.empty()) throw nm::InputError("score needs --text or --file");
      return run_score(text_from(score_text, score_file), score_flags, score_json);
    }
    if (*bench) return run_benchmark(corpus_path, bench_out, bench_flags, max_failure_rate, bench_alpha);
    if (*perturb) {
      if (perturb_text.empty() && perturb_file.empty()) throw nm::InputError("perturb needs --text or --file");
      return run_perturb(text_from(perturb_text, perturb_file), perturb_flags, perturb_format, perturb_out,
                         perturb_trajectories);
    }
    if (*stats) return run_stats(results_path, stats_out, stats_alpha);
    if (*fit) return run_fit(trajectory);
  } catch (const nm::PartialFailureError& e) {
    for (const auto& o : e.result().outcomes) {
      if (!o.evaluation) {
        spdlog::error("{}/{}/{}: {}", o.record.dataset, o.record.method, o.record.instance_id, o.error);
      }
    }
    spdlog::error("{}", e.what());
    return kExitPartial;
  } catch (const nm::ProviderError& e) {
    spdlog::error("{} ({})", e.what(), nm::to_string(e.kind()));
    return kExitProvider;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitInput;
  }
  return kExitInput;
}
