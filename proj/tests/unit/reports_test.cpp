#include "narrametric/reports.hpp"

#include <random>

#include "doctest.h"
#include "narrametric/error.hpp"
#include "test_support.hpp"

using namespace narrametric;
using Cells = std::vector<std::vector<std::optional<double>>>;

namespace {

// One metric per entry, values[dataset][method].
ResultsTable table_of(std::vector<std::string> datasets, std::vector<std::string> methods,
                      std::vector<std::pair<std::string, Cells>> metrics) {
  ResultsTable t;
  t.datasets = std::move(datasets);
  t.methods = std::move(methods);
  for (auto& [name, cells] : metrics) {
    t.metrics.push_back({name, metric_info(*metric_from_name(name)).direction});
    t.values.push_back(std::move(cells));
  }
  return t;
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

// Six datasets where method a always wins, b is second and c last.
ResultsTable separated() {
  Cells ttr, ppl;
  for (int d = 0; d < 6; ++d) {
    ttr.push_back({0.9 - 0.01 * d, 0.5, 0.1});
    ppl.push_back({std::nullopt, 20.0 + d, 10.0});
  }
  return table_of({"d0", "d1", "d2", "d3", "d4", "d5"}, {"a", "b", "c"}, {{"ttr", ttr}, {"ppl", ppl}});
}

}  // namespace

TEST_CASE("results.csv round trip is bit exact") {
  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> value(-1e6, 1e6);
  std::bernoulli_distribution missing(0.2);
  std::vector<std::pair<std::string, Cells>> metrics;
  for (const auto& info : all_metrics()) {
    Cells cells(3, std::vector<std::optional<double>>(4));
    for (auto& row : cells) {
      for (auto& v : row) {
        if (!missing(rng)) v = value(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
      }
    }
    metrics.emplace_back(std::string(info.name), cells);
  }
  const auto table = table_of({"x", "y, with comma", "z \"quoted\""}, {"m1", "m2", "m3", "m4"}, metrics);
  const auto parsed = parse_results_csv(results_csv(table));
  CHECK(parsed.datasets == table.datasets);
  CHECK(parsed.methods == table.methods);
  REQUIRE(parsed.metrics.size() == table.metrics.size());
  for (std::size_t m = 0; m < table.metrics.size(); ++m) {
    CHECK(parsed.metrics[m].name == table.metrics[m].name);
    CHECK(parsed.metrics[m].direction == table.metrics[m].direction);
  }
  CHECK(parsed.values == table.values);
  CHECK(results_csv(parsed) == results_csv(table));
}

TEST_CASE("results parsing accepts direction columns and undefined spellings") {
  const auto t = parse_results_csv(
      "dataset,method,metric,value,direction\n"
      "d,a,bleu,0.3,higher\n"
      "d,b,bleu,NA,higher\n"
      "d,a,ttr,–,\n"
      "d,b,ttr,-,\n");
  REQUIRE(t.metrics.size() == 2);
  CHECK(t.metrics[0].name == "bleu");
  CHECK(t.metrics[0].direction == Direction::kHigherIsBetter);
  CHECK(t.values[0][0][0] == 0.3);
  CHECK_FALSE(t.values[0][0][1].has_value());
  CHECK_FALSE(t.values[1][0][0].has_value());
}

TEST_CASE("results parsing errors") {
  CHECK_THROWS_AS(parse_results_csv(""), InputError);
  CHECK_THROWS_AS(parse_results_csv("dataset,method,value\n"), InputError);
  CHECK_THROWS_WITH_AS(parse_results_csv("dataset,method,metric,value\nd,a,bleu,1\n"),
                       "results line 2: unknown metric \"bleu\" and no direction column", InputError);
  CHECK_THROWS_WITH_AS(parse_results_csv("dataset,method,metric,value\nd,a,ttr,abc\n"),
                       "results line 2: bad value \"abc\"", InputError);
  CHECK_THROWS_AS(parse_results_csv("dataset,method,metric,value\nd,a,ttr,1\nd,a,ttr,2\n"), InputError);
  CHECK_THROWS_AS(parse_results_csv("dataset,method,metric,value\nd,a,ttr\n"), InputError);
  CHECK_THROWS_AS(load_results("/nonexistent/results.csv"), InputError);
}

TEST_CASE("summary bolds the best value per direction and marks undefined cells") {
  const auto md = summary_markdown(separated());
  CHECK(contains(md, "| TTR ↑ | PPL ↓ |"));
  CHECK(contains(md, "| d0 | a | **0.90** | – |"));
  CHECK(contains(md, "| d0 | b | 0.50 | 20.00 |"));
  CHECK(contains(md, "| d0 | c | 0.10 | **10.00** |"));
}

TEST_CASE("ties for the best value are all bold") {
  const auto md = summary_markdown(table_of({"d"}, {"a", "b"}, {{"ttr", {{0.5, 0.5}}}}));
  CHECK(contains(md, "| d | a | **0.50** |"));
  CHECK(contains(md, "| d | b | **0.50** |"));
}

TEST_CASE("a significant omnibus test enables Nemenyi") {
  const auto stats = compute_stats(separated());
  REQUIRE(stats.metrics.size() == 2);
  const auto& ttr = stats.metrics[0];
  REQUIRE(ttr.friedman.defined());
  // Perfectly consistent ranks 1, 2, 3 over six blocks: chi2 = 12.
  CHECK(ttr.friedman->chi2 == doctest::Approx(12.0));
  CHECK(ttr.friedman->p_value == doctest::Approx(std::exp(-6.0)));
  CHECK(ttr.nemenyi.has_value());
  CHECK(stats.critical_difference.has_value());
  CHECK(contains(friedman_markdown(stats), "| TTR ↑ | 12.00 | 2 | 0.002 | ** |"));
  CHECK(contains(nemenyi_markdown(stats), "| a vs c | **"));
}

TEST_CASE("a non-significant omnibus test suppresses Nemenyi") {
  Cells noisy = {{1, 2, 3}, {3, 2, 1}, {2, 3, 1}, {1, 3, 2}};
  const auto stats = compute_stats(table_of({"d0", "d1", "d2", "d3"}, {"a", "b", "c"}, {{"ttr", noisy}}));
  const auto& s = stats.metrics[0];
  REQUIRE(s.friedman.defined());
  CHECK(s.friedman->p_value >= 0.05);
  CHECK_FALSE(s.nemenyi.has_value());
  CHECK(s.note == "omnibus not significant");
  const auto md = nemenyi_markdown(stats);
  CHECK(contains(md, "| a vs b | -- |"));
  CHECK(contains(md, "- TTR: omnibus not significant (Friedman p = "));
  CHECK(contains(nemenyi_csv(stats), "a,b,--\n"));
}

TEST_CASE("columns that cannot be tested carry a note") {
  const auto two = compute_stats(table_of({"d0", "d1"}, {"a", "b"}, {{"ttr", {{1, 2}, {2, 1}}}}));
  CHECK(two.metrics[0].note == "use sign test");
  CHECK_FALSE(two.metrics[0].friedman.defined());
  const auto single = compute_stats(table_of({"d0"}, {"a", "b", "c"}, {{"ttr", {{1, 2, 3}}}}));
  CHECK(single.metrics[0].note == "needs at least two datasets");
  const auto empty = compute_stats(table_of({"d0", "d1"}, {"a", "b", "c"},
                                            {{"ttr", {{std::nullopt, std::nullopt, std::nullopt}, {1, 2, 3}}}}));
  CHECK_FALSE(empty.metrics[0].ranks.has_value());
  CHECK(contains(friedman_csv(empty), "ttr,NA,NA,NA,NA,"));
  CHECK_THROWS_AS(compute_stats(separated(), 1.5), InputError);
}

TEST_CASE("ranks and groups") {
  const auto stats = compute_stats(separated());
  const auto ranks = ranks_csv(stats);
  CHECK(contains(ranks, "ttr,a,1\n"));
  CHECK(contains(ranks, "ppl,a,3\n"));
  CHECK(contains(ranks, "ppl,c,1\n"));
  const auto groups = groups_csv(stats);
  CHECK(groups.rfind("group,method,mean_rank,metrics\n", 0) == 0);
  CHECK(contains(groups, "standard,a,2,2\n"));
  CHECK(contains(groups, "narrativity,a,NA,0\n"));
  CHECK(contains(groups, "all,b,2,2\n"));
}

TEST_CASE("benchmark reports are written deterministically") {
  const auto corpus = load_corpus(testing::fixture("table1_corpus.jsonl"));
  const BigramCacheProvider mock;
  const auto resources = LanguageResources::defaults();
  const auto result = run_benchmark(corpus, mock, resources, {});
  testing::TempDir first, second;
  emit_reports(result, first.path());
  emit_reports(run_benchmark(corpus, mock, resources, {}), second.path());
  for (const char* name : {"results.csv", "records.csv", "summary.md", "fit.csv", "ranks.csv", "groups.csv",
                           "friedman.csv", "friedman.md", "nemenyi.csv", "nemenyi.md"}) {
    CAPTURE(name);
    REQUIRE(std::filesystem::exists(first / name));
    CHECK(testing::read_file(first / name) == testing::read_file(second / name));
  }
  const auto records = testing::read_file(first / "records.csv");
  CHECK(contains(records, "german_credit,xai_description,applicant_1,cecpr,NA,zero ratio (division by zero)\n"));
  const auto reloaded = load_results(first / "results.csv");
  CHECK(reloaded.values == result.aggregates.values);
}

TEST_CASE("emit_reports fails on an unusable directory") {
  testing::TempDir dir;
  std::ofstream(dir / "file") << "x";
  const auto corpus = load_corpus(testing::fixture("table1_corpus.jsonl"));
  const BigramCacheProvider mock;
  const auto result = run_benchmark(corpus, mock, LanguageResources::defaults(), {});
  CHECK_THROWS_AS(emit_reports(result, dir / "file"), Error);
}
