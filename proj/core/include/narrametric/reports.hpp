#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "narrametric/corpus.hpp"
#include "narrametric/rank_stats.hpp"
#include "narrametric/value.hpp"

namespace narrametric {

struct MetricStats {
  ResultsMetric metric;
  std::optional<RankTable> ranks;                  // absent when the column cannot be ranked
  OrUndefined<FriedmanResult> friedman = Undefined{"not computed"};
  std::optional<NemenyiResult> nemenyi;            // only after a significant omnibus test
  std::string note;                                // why friedman or nemenyi is missing
};

struct StatsReport {
  double alpha = 0.05;
  std::vector<std::string> datasets;
  std::vector<std::string> methods;
  std::optional<double> critical_difference;
  std::vector<MetricStats> metrics;
};

StatsReport compute_stats(const ResultsTable& table, double alpha = 0.05);

// Long form dataset,method,metric,value with values printed with 17
// significant digits and undefined cells written as NA.
std::string results_csv(const ResultsTable& table);
// Accepts an optional direction column ("higher"/"lower"); without it the
// metric name must be a known metric. NA, "-", "–" and empty mean undefined.
ResultsTable parse_results_csv(std::string_view content);
ResultsTable load_results(const std::filesystem::path& path);

std::string summary_markdown(const ResultsTable& table,
                             const std::vector<std::vector<FitDiagnostics>>* fit = nullptr);
// Per-record values: dataset,method,instance_id,metric,value,reason. Failed
// records get a single row with metric "error".
std::string records_csv(const BenchmarkResult& result);

std::string fit_csv(const ResultsTable& table, const std::vector<std::vector<FitDiagnostics>>& fit);

std::string ranks_csv(const StatsReport& stats);
std::string groups_csv(const StatsReport& stats);
std::string friedman_csv(const StatsReport& stats);
std::string friedman_markdown(const StatsReport& stats);
std::string nemenyi_csv(const StatsReport& stats);
std::string nemenyi_markdown(const StatsReport& stats);

// ranks.csv, groups.csv, friedman.csv/.md and nemenyi.csv/.md.
void write_stats_reports(const StatsReport& stats, const std::filesystem::path& out_dir);

// results.csv, records.csv, summary.md, fit.csv and the stats outputs. Throws Error when
// the directory cannot be created or written.
void emit_reports(const BenchmarkResult& result, const std::filesystem::path& out_dir,
                  double alpha = 0.05);

void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace narrametric
