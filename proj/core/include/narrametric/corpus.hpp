#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "narrametric/error.hpp"
#include "narrametric/lexical_metrics.hpp"
#include "narrametric/lm_scoring.hpp"
#include "narrametric/narrativity.hpp"
#include "narrametric/rank_stats.hpp"

namespace narrametric {

struct CorpusRecord {
  std::string dataset;
  std::string method;
  std::string instance_id;
  std::string text;
};

// JSON Lines, one object per line with string fields dataset, method,
// instance_id and non-empty text. Blank lines are skipped. Errors name the
// line number; a repeated (dataset, method, instance_id) names the key.
std::vector<CorpusRecord> parse_corpus(std::istream& in);
std::vector<CorpusRecord> load_corpus(const std::filesystem::path& path);

struct ResultsMetric {
  std::string name;
  Direction direction = Direction::kHigherIsBetter;
};

// Aggregated values per metric, dataset and method; nullopt renders as "–".
struct ResultsTable {
  std::vector<std::string> datasets;
  std::vector<std::string> methods;
  std::vector<ResultsMetric> metrics;
  std::vector<std::vector<std::vector<std::optional<double>>>> values;  // [metric][dataset][method]

  BenchmarkMatrix matrix(std::size_t metric_index) const;
};

struct FitDiagnostics {
  std::size_t instances = 0;
  std::size_t fitted = 0;
  std::optional<double> mean_rate;
  std::optional<double> mean_r_squared;
  std::optional<double> mean_rmse;
};

struct RecordOutcome {
  CorpusRecord record;
  std::optional<TextEvaluation> evaluation;
  std::string error;  // empty on success
};

struct BenchmarkResult {
  std::vector<RecordOutcome> outcomes;  // corpus order
  ResultsTable aggregates;              // datasets and methods in first-appearance order
  std::vector<std::vector<FitDiagnostics>> fit;  // [dataset][method]

  std::size_t failure_count() const;
};

struct BenchmarkConfig {
  EvaluationConfig evaluation;
  int max_inflight = 4;
  double max_failure_rate = 0.10;
};

class PartialFailureError : public Error {
 public:
  PartialFailureError(const std::string& message, BenchmarkResult result)
      : Error(message), result_(std::move(result)) {}
  const BenchmarkResult& result() const { return result_; }

 private:
  BenchmarkResult result_;
};

// Evaluates every record with up to max_inflight concurrent workers and
// averages each metric per (dataset, method) over its defined values.
// Throws InputError for an empty corpus and PartialFailureError when the share
// of failed records exceeds max_failure_rate.
BenchmarkResult run_benchmark(std::span<const CorpusRecord> corpus, const LogprobProvider& provider,
                              const LanguageResources& resources, const BenchmarkConfig& config);

// Mean of the defined values, nullopt when there are none.
std::optional<double> mean_of_defined(std::span<const std::optional<double>> values);

}  // namespace narrametric
