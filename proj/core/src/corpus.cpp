#include "narrametric/corpus.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <set>
#include <thread>
#include <tuple>

#include "json.hpp"

namespace narrametric {

namespace {

std::size_t index_of(std::vector<std::string>& names, const std::string& name) {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it != names.end()) return static_cast<std::size_t>(it - names.begin());
  names.push_back(name);
  return names.size() - 1;
}

std::string describe(const std::exception& e) {
  if (const auto* provider = dynamic_cast<const ProviderError*>(&e)) {
    return std::string("provider error (") + to_string(provider->kind()) + "): " + e.what();
  }
  if (dynamic_cast<const InputError*>(&e) != nullptr) return std::string("input error: ") + e.what();
  return std::string("error: ") + e.what();
}

}  // namespace

std::vector<CorpusRecord> parse_corpus(std::istream& in) {
  std::vector<CorpusRecord> records;
  std::set<std::tuple<std::string, std::string, std::string>> keys;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "corpus line " + std::to_string(line_number);
    const auto doc = nlohmann::json::parse(line, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) throw InputError(where + ": not a JSON object");
    CorpusRecord record;
    for (auto [field, target] : {std::pair{"dataset", &record.dataset}, std::pair{"method", &record.method},
                                 std::pair{"instance_id", &record.instance_id}, std::pair{"text", &record.text}}) {
      if (!doc.contains(field) || !doc[field].is_string()) {
        throw InputError(where + ": missing string field \"" + field + "\"");
      }
      *target = doc[field].get<std::string>();
    }
    if (record.text.find_first_not_of(" \t\r\n") == std::string::npos) {
      throw InputError(where + ": empty \"text\"");
    }
    if (!keys.emplace(record.dataset, record.method, record.instance_id).second) {
      throw InputError(where + ": duplicate key (dataset=" + record.dataset + ", method=" + record.method +
                       ", instance_id=" + record.instance_id + ")");
    }
    records.push_back(std::move(record));
  }
  return records;
}

std::vector<CorpusRecord> load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read corpus " + path.string());
  return parse_corpus(in);
}

BenchmarkMatrix ResultsTable::matrix(std::size_t metric_index) const {
  BenchmarkMatrix m;
  m.metric = metrics.at(metric_index).name;
  m.direction = metrics.at(metric_index).direction;
  m.datasets = datasets;
  m.methods = methods;
  m.values = values.at(metric_index);
  return m;
}

std::size_t BenchmarkResult::failure_count() const {
  return static_cast<std::size_t>(
      std::count_if(outcomes.begin(), outcomes.end(), [](const RecordOutcome& o) { return !o.evaluation; }));
}

std::optional<double> mean_of_defined(std::span<const std::optional<double>> values) {
  double sum = 0;
  std::size_t n = 0;
  for (const auto& v : values) {
    if (!v) continue;
    sum += *v;
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

BenchmarkResult run_benchmark(std::span<const CorpusRecord> corpus, const LogprobProvider& provider,
                              const LanguageResources& resources, const BenchmarkConfig& config) {
  if (corpus.empty()) throw InputError("empty corpus");
  if (config.max_inflight < 1) throw InputError("max_inflight must be at least 1");

  BenchmarkResult result;
  result.outcomes.resize(corpus.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < corpus.size(); i = next++) {
      RecordOutcome& outcome = result.outcomes[i];
      outcome.record = corpus[i];
      try {
        outcome.evaluation = evaluate_text(corpus[i].text, provider, resources, config.evaluation);
      } catch (const std::exception& e) {
        outcome.error = describe(e);
      }
    }
  };
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(config.max_inflight), corpus.size());
  std::vector<std::thread> threads;
  for (std::size_t t = 1; t < workers; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();

  ResultsTable& table = result.aggregates;
  for (const CorpusRecord& record : corpus) {
    index_of(table.datasets, record.dataset);
    index_of(table.methods, record.method);
  }
  for (const MetricInfo& info : all_metrics()) table.metrics.push_back({std::string(info.name), info.direction});

  const std::size_t nd = table.datasets.size();
  const std::size_t nm = table.methods.size();
  // samples[dataset][method][metric] over successful records
  std::vector<std::vector<std::vector<std::vector<std::optional<double>>>>> samples(
      nd, std::vector<std::vector<std::vector<std::optional<double>>>>(
              nm, std::vector<std::vector<std::optional<double>>>(kMetricCount)));
  std::vector<std::vector<std::vector<DecayFit>>> fits(nd, std::vector<std::vector<DecayFit>>(nm));
  result.fit.assign(nd, std::vector<FitDiagnostics>(nm));
  for (const RecordOutcome& outcome : result.outcomes) {
    if (!outcome.evaluation) continue;
    const std::size_t d = index_of(table.datasets, outcome.record.dataset);
    const std::size_t j = index_of(table.methods, outcome.record.method);
    for (std::size_t m = 0; m < kMetricCount; ++m) {
      const MetricValue& v = outcome.evaluation->metrics[static_cast<MetricId>(m)];
      samples[d][j][m].push_back(v ? std::optional<double>(*v) : std::nullopt);
    }
    ++result.fit[d][j].instances;
    if (outcome.evaluation->fit) fits[d][j].push_back(*outcome.evaluation->fit);
  }

  table.values.assign(kMetricCount, std::vector<std::vector<std::optional<double>>>(
                                        nd, std::vector<std::optional<double>>(nm)));
  for (std::size_t d = 0; d < nd; ++d) {
    for (std::size_t j = 0; j < nm; ++j) {
      for (std::size_t m = 0; m < kMetricCount; ++m) table.values[m][d][j] = mean_of_defined(samples[d][j][m]);
      FitDiagnostics& diag = result.fit[d][j];
      diag.fitted = fits[d][j].size();
      std::vector<std::optional<double>> rate, r2, rmse;
      for (const DecayFit& f : fits[d][j]) {
        rate.emplace_back(f.rate);
        r2.emplace_back(f.r_squared);
        rmse.emplace_back(f.rmse);
      }
      diag.mean_rate = mean_of_defined(rate);
      diag.mean_r_squared = mean_of_defined(r2);
      diag.mean_rmse = mean_of_defined(rmse);
    }
  }

  const std::size_t failures = result.failure_count();
  if (static_cast<double>(failures) > config.max_failure_rate * static_cast<double>(corpus.size())) {
    std::string message = std::to_string(failures) + " of " + std::to_string(corpus.size()) +
                          " records failed, above the allowed share";
    for (const RecordOutcome& o : result.outcomes) {
      if (!o.evaluation) {
        message += "; first failure (" + o.record.dataset + "/" + o.record.method + "/" + o.record.instance_id +
                   "): " + o.error;
        break;
      }
    }
    throw PartialFailureError(message, std::move(result));
  }
  return result;
}

}  // namespace narrametric
