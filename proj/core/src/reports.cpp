#include "narrametric/reports.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "narrametric/error.hpp"

namespace narrametric {

namespace {

constexpr const char* kUndefinedCell = "–";

std::string full(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string p_cell(double p) { return p < 0.001 ? "<0.001" : fixed(p, 3); }

std::string stars(double p) {
  if (p < 0.001) return "***";
  if (p < 0.01) return "**";
  if (p < 0.05) return "*";
  return "";
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_row(std::initializer_list<std::string> fields) {
  std::string out;
  bool first = true;
  for (const auto& f : fields) {
    if (!first) out += ',';
    out += csv_field(f);
    first = false;
  }
  return out + "\n";
}

std::vector<std::vector<std::string>> parse_csv(std::string_view content) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  for (std::size_t i = 0; i < content.size(); ++i) {
    const char c = content[i];
    if (quoted) {
      if (c == '"' && i + 1 < content.size() && content[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"' && field.empty()) {
      quoted = true;
      field_started = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      field_started = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < content.size() && content[i + 1] == '\n') ++i;
      if (field_started || !field.empty() || !row.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
      }
      row.clear();
      field.clear();
      field_started = false;
    } else {
      field += c;
      field_started = true;
    }
  }
  if (quoted) throw InputError("unterminated quote in CSV");
  if (field_started || !field.empty() || !row.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::optional<double> parse_value(const std::string& cell, std::size_t line) {
  if (cell.empty() || cell == "NA" || cell == "-" || cell == kUndefinedCell) return std::nullopt;
  double v = 0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) {
    throw InputError("results line " + std::to_string(line) + ": bad value \"" + cell + "\"");
  }
  return v;
}

std::optional<Direction> parse_direction(const std::string& cell) {
  if (cell == "higher" || cell == "up" || cell == "↑") return Direction::kHigherIsBetter;
  if (cell == "lower" || cell == "down" || cell == "↓") return Direction::kLowerIsBetter;
  return std::nullopt;
}

std::string label_of(const ResultsMetric& metric) {
  const auto id = metric_from_name(metric.name);
  return id ? std::string(metric_info(*id).label) : metric.name;
}

std::string arrow(Direction d) { return d == Direction::kHigherIsBetter ? "↑" : "↓"; }

std::size_t find_index(const std::vector<std::string>& names, const std::string& name) {
  return static_cast<std::size_t>(std::find(names.begin(), names.end(), name) - names.begin());
}

}  // namespace

std::string results_csv(const ResultsTable& table) {
  std::string out = "dataset,method,metric,value\n";
  for (std::size_t d = 0; d < table.datasets.size(); ++d) {
    for (std::size_t j = 0; j < table.methods.size(); ++j) {
      for (std::size_t m = 0; m < table.metrics.size(); ++m) {
        const auto& v = table.values[m][d][j];
        out += csv_row({table.datasets[d], table.methods[j], table.metrics[m].name, v ? full(*v) : "NA"});
      }
    }
  }
  return out;
}

ResultsTable parse_results_csv(std::string_view content) {
  const auto rows = parse_csv(content);
  if (rows.empty()) throw InputError("results file is empty");
  const auto& header = rows.front();
  auto column = [&](const std::string& name) -> std::optional<std::size_t> {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) return std::nullopt;
    return static_cast<std::size_t>(it - header.begin());
  };
  const auto c_dataset = column("dataset");
  const auto c_method = column("method");
  const auto c_metric = column("metric");
  const auto c_value = column("value");
  const auto c_direction = column("direction");
  if (!c_dataset || !c_method || !c_metric || !c_value) {
    throw InputError("results header must contain dataset, method, metric and value");
  }

  ResultsTable table;
  struct Cell {
    std::size_t metric, dataset, method;
    std::optional<double> value;
  };
  std::vector<Cell> cells;
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::size_t> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::size_t line = r + 1;
    if (row.size() != header.size()) {
      throw InputError("results line " + std::to_string(line) + ": expected " + std::to_string(header.size()) +
                       " fields");
    }
    const std::string& metric = row[*c_metric];
    std::size_t m = 0;
    while (m < table.metrics.size() && table.metrics[m].name != metric) ++m;
    if (m == table.metrics.size()) {
      std::optional<Direction> direction;
      if (c_direction) direction = parse_direction(row[*c_direction]);
      if (!direction) {
        const auto id = metric_from_name(metric);
        if (!id) {
          throw InputError("results line " + std::to_string(line) + ": unknown metric \"" + metric +
                           "\" and no direction column");
        }
        direction = metric_info(*id).direction;
      }
      table.metrics.push_back({metric, *direction});
    }
    std::size_t d = find_index(table.datasets, row[*c_dataset]);
    if (d == table.datasets.size()) table.datasets.push_back(row[*c_dataset]);
    std::size_t j = find_index(table.methods, row[*c_method]);
    if (j == table.methods.size()) table.methods.push_back(row[*c_method]);
    if (!seen.emplace(std::make_tuple(m, d, j), r).second) {
      throw InputError("results line " + std::to_string(line) + ": duplicate entry for " + row[*c_dataset] +
                       "/" + row[*c_method] + "/" + metric);
    }
    cells.push_back({m, d, j, parse_value(row[*c_value], line)});
  }
  table.values.assign(table.metrics.size(),
                      std::vector<std::vector<std::optional<double>>>(
                          table.datasets.size(), std::vector<std::optional<double>>(table.methods.size())));
  for (const Cell& c : cells) table.values[c.metric][c.dataset][c.method] = c.value;
  return table;
}

ResultsTable load_results(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read results " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_results_csv(buffer.str());
}

std::string summary_markdown(const ResultsTable& table, const std::vector<std::vector<FitDiagnostics>>* fit) {
  std::string out = "# Metric summary\n\n";
  out += "Means over instances; " + std::string(kUndefinedCell) +
         " marks cells without a defined value. Bold marks the best value per dataset.\n\n";
  out += "| Dataset | Method |";
  std::string rule = "|---|---|";
  for (const auto& metric : table.metrics) {
    out += " " + label_of(metric) + " " + arrow(metric.direction) + " |";
    rule += "---:|";
  }
  out += "\n" + rule + "\n";
  for (std::size_t d = 0; d < table.datasets.size(); ++d) {
    std::vector<std::optional<double>> best(table.metrics.size());
    for (std::size_t m = 0; m < table.metrics.size(); ++m) {
      for (const auto& v : table.values[m][d]) {
        if (!v) continue;
        const bool higher = table.metrics[m].direction == Direction::kHigherIsBetter;
        if (!best[m] || (higher ? *v > *best[m] : *v < *best[m])) best[m] = v;
      }
    }
    for (std::size_t j = 0; j < table.methods.size(); ++j) {
      out += "| " + table.datasets[d] + " | " + table.methods[j] + " |";
      for (std::size_t m = 0; m < table.metrics.size(); ++m) {
        const auto& v = table.values[m][d][j];
        if (!v) {
          out += " " + std::string(kUndefinedCell) + " |";
        } else if (*v == *best[m]) {
          out += " **" + fixed(*v, 2) + "** |";
        } else {
          out += " " + fixed(*v, 2) + " |";
        }
      }
      out += "\n";
    }
  }

  if (fit != nullptr) {
    const std::size_t dcpr = find_index([&] {
      std::vector<std::string> names;
      for (const auto& m : table.metrics) names.push_back(m.name);
      return names;
    }(), "dcpr");
    out += "\n## Decay fit diagnostics\n\n";
    out += "| Dataset | Method | Fitted | r | DCPR | R² | RMSE |\n|---|---|---:|---:|---:|---:|---:|\n";
    auto cell = [](const std::optional<double>& v, int decimals) {
      return v ? fixed(*v, decimals) : std::string(kUndefinedCell);
    };
    for (std::size_t d = 0; d < table.datasets.size(); ++d) {
      for (std::size_t j = 0; j < table.methods.size(); ++j) {
        const FitDiagnostics& diag = (*fit)[d][j];
        const std::optional<double> dcpr_value =
            dcpr < table.metrics.size() ? table.values[dcpr][d][j] : std::nullopt;
        out += "| " + table.datasets[d] + " | " + table.methods[j] + " | " + std::to_string(diag.fitted) + "/" +
               std::to_string(diag.instances) + " | " + cell(diag.mean_rate, 2) + " | " + cell(dcpr_value, 2) +
               " | " + cell(diag.mean_r_squared, 3) + " | " + cell(diag.mean_rmse, 2) + " |\n";
      }
    }
  }
  return out;
}

std::string records_csv(const BenchmarkResult& result) {
  std::string out = "dataset,method,instance_id,metric,value,reason\n";
  for (const RecordOutcome& o : result.outcomes) {
    const CorpusRecord& r = o.record;
    if (!o.evaluation) {
      out += csv_row({r.dataset, r.method, r.instance_id, "error", "NA", o.error});
      continue;
    }
    for (const MetricInfo& info : all_metrics()) {
      const MetricValue& v = o.evaluation->metrics[info.id];
      out += csv_row({r.dataset, r.method, r.instance_id, std::string(info.name), v ? full(*v) : "NA", v.reason()});
    }
  }
  return out;
}

std::string fit_csv(const ResultsTable& table, const std::vector<std::vector<FitDiagnostics>>& fit) {
  std::string out = "dataset,method,instances,fitted,mean_rate,mean_r_squared,mean_rmse\n";
  auto cell = [](const std::optional<double>& v) { return v ? full(*v) : std::string("NA"); };
  for (std::size_t d = 0; d < table.datasets.size(); ++d) {
    for (std::size_t j = 0; j < table.methods.size(); ++j) {
      const FitDiagnostics& diag = fit[d][j];
      out += csv_row({table.datasets[d], table.methods[j], std::to_string(diag.instances),
                      std::to_string(diag.fitted), cell(diag.mean_rate), cell(diag.mean_r_squared),
                      cell(diag.mean_rmse)});
    }
  }
  return out;
}

StatsReport compute_stats(const ResultsTable& table, double alpha) {
  if (!(alpha > 0 && alpha < 1)) throw InputError("alpha must lie in (0, 1)");
  StatsReport report;
  report.alpha = alpha;
  report.datasets = table.datasets;
  report.methods = table.methods;
  const int k = static_cast<int>(table.methods.size());
  const int n = static_cast<int>(table.datasets.size());
  if (k >= 2 && n >= 1) report.critical_difference = critical_difference(k, n, alpha);

  for (std::size_t m = 0; m < table.metrics.size(); ++m) {
    MetricStats stats;
    stats.metric = table.metrics[m];
    try {
      stats.ranks = rank_with_missing(table.matrix(m));
    } catch (const InputError& e) {
      stats.note = e.what();
      stats.friedman = Undefined{stats.note};
      report.metrics.push_back(std::move(stats));
      continue;
    }
    if (k < 3) {
      stats.note = "use sign test";
    } else if (n < 2) {
      stats.note = "needs at least two datasets";
    } else {
      const FriedmanResult f = friedman(*stats.ranks);
      stats.friedman = f;
      if (f.p_value < alpha) {
        stats.nemenyi = nemenyi(*stats.ranks);
      } else {
        stats.note = "omnibus not significant";
      }
    }
    if (!stats.friedman.defined() && !stats.note.empty()) stats.friedman = Undefined{stats.note};
    report.metrics.push_back(std::move(stats));
  }
  return report;
}

std::string ranks_csv(const StatsReport& stats) {
  std::string out = "metric,method,average_rank\n";
  for (const MetricStats& s : stats.metrics) {
    if (!s.ranks) continue;
    for (std::size_t j = 0; j < s.ranks->methods.size(); ++j) {
      out += csv_row({s.metric.name, s.ranks->methods[j], full(s.ranks->average_ranks[j])});
    }
  }
  return out;
}

std::string groups_csv(const StatsReport& stats) {
  std::string out = "group,method,mean_rank,metrics\n";
  auto emit = [&](const std::string& group, auto&& include) {
    for (std::size_t j = 0; j < stats.methods.size(); ++j) {
      std::vector<std::optional<double>> ranks;
      for (const MetricStats& s : stats.metrics) {
        if (s.ranks && include(s.metric)) ranks.emplace_back(s.ranks->average_ranks[j]);
      }
      const auto mean = mean_of_defined(ranks);
      out += csv_row({group, stats.methods[j], mean ? full(*mean) : "NA", std::to_string(ranks.size())});
    }
  };
  auto in_group = [](MetricGroup group) {
    return [group](const ResultsMetric& metric) {
      const auto id = metric_from_name(metric.name);
      return id && metric_info(*id).group == group;
    };
  };
  emit("standard", in_group(MetricGroup::kStandard));
  emit("narrativity", in_group(MetricGroup::kNarrativity));
  emit("all", [](const ResultsMetric&) { return true; });
  return out;
}

std::string friedman_csv(const StatsReport& stats) {
  std::string out = "metric,chi2,df,p_value,significant,note\n";
  for (const MetricStats& s : stats.metrics) {
    if (s.friedman) {
      const FriedmanResult& f = *s.friedman;
      out += csv_row({s.metric.name, full(f.chi2), std::to_string(f.df), full(f.p_value),
                      f.p_value < stats.alpha ? "yes" : "no", s.note});
    } else {
      out += csv_row({s.metric.name, "NA", "NA", "NA", "NA", s.note});
    }
  }
  return out;
}

std::string friedman_markdown(const StatsReport& stats) {
  std::string out = "# Friedman test\n\n";
  out += "k = " + std::to_string(stats.methods.size()) + " methods, N = " + std::to_string(stats.datasets.size()) +
         " datasets, alpha = " + fixed(stats.alpha, 2) + ".\n\n";
  out += "| Metric | χ² | df | p | |\n|---|---:|---:|---:|---|\n";
  for (const MetricStats& s : stats.metrics) {
    const std::string name = label_of(s.metric) + " " + arrow(s.metric.direction);
    if (s.friedman) {
      const FriedmanResult& f = *s.friedman;
      out += "| " + name + " | " + fixed(f.chi2, 2) + " | " + std::to_string(f.df) + " | " + p_cell(f.p_value) +
             " | " + stars(f.p_value) + " |\n";
    } else {
      out += "| " + name + " | " + kUndefinedCell + " | " + kUndefinedCell + " | " + kUndefinedCell + " | " +
             s.note + " |\n";
    }
  }
  out += "\nSignificance: * p < 0.05, ** p < 0.01, *** p < 0.001.\n";
  if (stats.critical_difference) {
    out += "\nCritical difference (Nemenyi, alpha = " + fixed(stats.alpha, 2) +
           "): " + fixed(*stats.critical_difference, 2) + "\n";
  }
  return out;
}

namespace {

struct PairColumn {
  std::size_t i, j;
};

std::vector<PairColumn> pairs_of(std::size_t k) {
  std::vector<PairColumn> pairs;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) pairs.push_back({i, j});
  }
  return pairs;
}

}  // namespace

std::string nemenyi_csv(const StatsReport& stats) {
  std::string out = "method_a,method_b";
  for (const MetricStats& s : stats.metrics) out += "," + csv_field(s.metric.name);
  out += "\n";
  for (const PairColumn& pair : pairs_of(stats.methods.size())) {
    out += csv_field(stats.methods[pair.i]) + "," + csv_field(stats.methods[pair.j]);
    for (const MetricStats& s : stats.metrics) {
      out += "," + (s.nemenyi ? full(s.nemenyi->p_values[pair.i][pair.j]) : std::string("--"));
    }
    out += "\n";
  }
  return out;
}

std::string nemenyi_markdown(const StatsReport& stats) {
  std::string out = "# Nemenyi post-hoc p-values\n\n";
  out += "Bold cells are significant at alpha = " + fixed(stats.alpha, 2) +
         ". Columns marked -- had no post-hoc analysis.\n\n| Comparison |";
  std::string rule = "|---|";
  for (const MetricStats& s : stats.metrics) {
    out += " " + label_of(s.metric) + " |";
    rule += "---:|";
  }
  out += "\n" + rule + "\n";
  for (const PairColumn& pair : pairs_of(stats.methods.size())) {
    out += "| " + stats.methods[pair.i] + " vs " + stats.methods[pair.j] + " |";
    for (const MetricStats& s : stats.metrics) {
      if (!s.nemenyi) {
        out += " -- |";
        continue;
      }
      const double p = s.nemenyi->p_values[pair.i][pair.j];
      out += p < stats.alpha ? " **" + p_cell(p) + "** |" : " " + p_cell(p) + " |";
    }
    out += "\n";
  }
  bool header = false;
  for (const MetricStats& s : stats.metrics) {
    if (s.nemenyi) continue;
    if (!header) {
      out += "\n";
      header = true;
    }
    out += "- " + label_of(s.metric) + ": " + s.note;
    if (s.friedman) out += " (Friedman p = " + fixed(s.friedman->p_value, 3) + ")";
    out += "\n";
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error("cannot write " + path.string());
}

namespace {

void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw Error("cannot create output directory " + dir.string());
}

}  // namespace

void write_stats_reports(const StatsReport& stats, const std::filesystem::path& out_dir) {
  ensure_directory(out_dir);
  write_text_file(out_dir / "ranks.csv", ranks_csv(stats));
  write_text_file(out_dir / "groups.csv", groups_csv(stats));
  write_text_file(out_dir / "friedman.csv", friedman_csv(stats));
  write_text_file(out_dir / "friedman.md", friedman_markdown(stats));
  write_text_file(out_dir / "nemenyi.csv", nemenyi_csv(stats));
  write_text_file(out_dir / "nemenyi.md", nemenyi_markdown(stats));
}

void emit_reports(const BenchmarkResult& result, const std::filesystem::path& out_dir, double alpha) {
  ensure_directory(out_dir);
  write_text_file(out_dir / "results.csv", results_csv(result.aggregates));
  write_text_file(out_dir / "records.csv", records_csv(result));
  write_text_file(out_dir / "summary.md", summary_markdown(result.aggregates, &result.fit));
  write_text_file(out_dir / "fit.csv", fit_csv(result.aggregates, result.fit));
  write_stats_reports(compute_stats(result.aggregates, alpha), out_dir);
}

}  // namespace narrametric
