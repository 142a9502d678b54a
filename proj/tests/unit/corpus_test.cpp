#include "narrametric/corpus.hpp"

#include <sstream>

#include "doctest.h"
#include "narrametric/rank_stats.hpp"
#include "test_support.hpp"

using namespace narrametric;

namespace {

std::vector<CorpusRecord> parse(const std::string& content) {
  std::istringstream in(content);
  return parse_corpus(in);
}

std::string record(const std::string& dataset, const std::string& method, const std::string& id,
                   const std::string& text) {
  return nlohmann::json{{"dataset", dataset}, {"method", method}, {"instance_id", id}, {"text", text}}.dump() +
         "\n";
}

const LanguageResources& resources() {
  static const LanguageResources r = LanguageResources::defaults();
  return r;
}

std::string error_of(const std::string& content) {
  try {
    parse(content);
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

// Scores through a mock but fails for texts containing "FAIL".
class SometimesFailing final : public LogprobProvider {
 public:
  ScoredText score(std::string_view text) const override {
    if (text.find("FAIL") != std::string_view::npos) throw ProviderError("boom", ProviderErrorKind::kProviderSide);
    return mock_.score(text);
  }
  std::string identity() const override { return "sometimes"; }

 private:
  BigramCacheProvider mock_;
};

}  // namespace

TEST_CASE("shipped corpus has the three reference records") {
  const auto records = load_corpus(testing::fixture("table1_corpus.jsonl"));
  REQUIRE(records.size() == 3);
  CHECK(records[0].method == "xai_narrative");
  CHECK(records[1].method == "xai_description");
  CHECK(records[2].method == "gaming");
  for (const auto& r : records) CHECK(r.dataset == "german_credit");
}

TEST_CASE("corpus parsing skips blank lines") {
  const auto records = parse("\n" + record("d", "m", "1", "Some text.") + "   \n" + record("d", "m", "2", "More."));
  CHECK(records.size() == 2);
  CHECK(records[1].instance_id == "2");
}

TEST_CASE("corpus errors name the line") {
  CHECK(error_of(record("d", "m", "1", "ok") + "{broken\n") == "corpus line 2: not a JSON object");
  CHECK(error_of("\n\n[1, 2]\n") == "corpus line 3: not a JSON object");
  CHECK(error_of(R"({"dataset":"d","method":"m","text":"t"})") ==
        "corpus line 1: missing string field \"instance_id\"");
  CHECK(error_of(R"({"dataset":"d","method":"m","instance_id":3,"text":"t"})") ==
        "corpus line 1: missing string field \"instance_id\"");
  CHECK(error_of(record("d", "m", "1", "  ")) == "corpus line 1: empty \"text\"");
  CHECK(error_of(record("d", "m", "1", "a") + record("d", "m", "1", "b")) ==
        "corpus line 2: duplicate key (dataset=d, method=m, instance_id=1)");
  CHECK_THROWS_AS(load_corpus("/nonexistent/corpus.jsonl"), InputError);
}

TEST_CASE("empty corpus is rejected") {
  const BigramCacheProvider mock;
  CHECK_THROWS_WITH_AS(run_benchmark({}, mock, resources(), {}), "empty corpus", InputError);
}

TEST_CASE("mean_of_defined") {
  const std::vector<std::optional<double>> values = {1.0, std::nullopt, 3.0};
  CHECK(mean_of_defined(values) == 2.0);
  const std::vector<std::optional<double>> none = {std::nullopt};
  CHECK_FALSE(mean_of_defined(none).has_value());
}

TEST_CASE("benchmark aggregates per dataset and method") {
  const auto corpus = parse(record("d1", "a", "1", "W1 w2 w1. W2 w3 w2. W3 w4 w3.") +
                            record("d1", "a", "2", "Alpha beta. Gamma delta. Epsilon zeta.") +
                            record("d1", "b", "1", "One lonely sentence here.") +
                            record("d2", "b", "1", "Some words. Other words. Final words."));
  const BigramCacheProvider mock;
  BenchmarkConfig config;
  config.max_inflight = 3;
  const auto result = run_benchmark(corpus, mock, resources(), config);
  CHECK(result.failure_count() == 0);
  const auto& t = result.aggregates;
  CHECK(t.datasets == std::vector<std::string>{"d1", "d2"});
  CHECK(t.methods == std::vector<std::string>{"a", "b"});
  REQUIRE(t.metrics.size() == kMetricCount);
  const auto ttr = static_cast<std::size_t>(MetricId::kTtr);
  const auto csr = static_cast<std::size_t>(MetricId::kCsr);
  const double ttr1 = result.outcomes[0].evaluation->surface.ttr;
  const double ttr2 = result.outcomes[1].evaluation->surface.ttr;
  CHECK(*t.values[ttr][0][0] == doctest::Approx((ttr1 + ttr2) / 2));
  // Single-sentence method: undefined CSR, and d2 has no record for method a.
  CHECK_FALSE(t.values[csr][0][1].has_value());
  CHECK_FALSE(t.values[ttr][1][0].has_value());
  CHECK(result.fit[0][0].instances == 2);
  // Under the mock the disjoint text scores 1000 at every prefix: flat, so not fitted.
  CHECK(result.fit[0][0].fitted == 1);
  CHECK(result.fit[0][1].fitted == 0);
  CHECK_FALSE(result.fit[0][1].mean_rate.has_value());
}

TEST_CASE("single-sentence methods rank equal last on CSR and CPR columns") {
  const auto corpus = parse(record("d", "narrative", "1", testing::narrative()) +
                            record("d", "short_a", "1", "Just one sentence.") +
                            record("d", "short_b", "1", "Another single line."));
  const BigramCacheProvider mock;
  const auto result = run_benchmark(corpus, mock, resources(), {});
  for (MetricId id : {MetricId::kCsr, MetricId::kCecpr, MetricId::kDcpr, MetricId::kCcpr, MetricId::kTtcpr,
                      MetricId::kVcpr}) {
    CAPTURE(metric_info(id).label);
    const auto table = rank_with_missing(result.aggregates.matrix(static_cast<std::size_t>(id)));
    CHECK(table.ranks[0] == std::vector<double>{1, 2.5, 2.5});
  }
}

TEST_CASE("partial failures within the threshold are recorded") {
  std::string content;
  for (int i = 0; i < 20; ++i) {
    content += record("d", "m", std::to_string(i), i == 7 ? "FAIL here. Really." : "Fine text. More text.");
  }
  const auto corpus = parse(content);
  const SometimesFailing provider;
  const auto result = run_benchmark(corpus, provider, resources(), {});
  CHECK(result.failure_count() == 1);
  CHECK(result.outcomes[7].error.find("boom") != std::string::npos);
  CHECK_FALSE(result.outcomes[7].evaluation.has_value());
  CHECK(result.outcomes[8].evaluation.has_value());
}

TEST_CASE("failures above the threshold raise with the partial result") {
  std::string content;
  for (int i = 0; i < 10; ++i) {
    content += record("d", "m", std::to_string(i), i < 2 ? "FAIL now. Again." : "Fine text. More text.");
  }
  const auto corpus = parse(content);
  const SometimesFailing provider;
  try {
    run_benchmark(corpus, provider, resources(), {});
    FAIL("expected a partial failure");
  } catch (const PartialFailureError& e) {
    CHECK(e.result().failure_count() == 2);
    CHECK(std::string(e.what()).rfind("2 of 10 records failed", 0) == 0);
  }
  BenchmarkConfig lenient;
  lenient.max_failure_rate = 0.2;
  CHECK(run_benchmark(corpus, provider, resources(), lenient).failure_count() == 2);
}

TEST_CASE("property: concurrency does not change the results") {
  std::string content;
  std::mt19937 rng(77);
  for (int i = 0; i < 12; ++i) {
    content += record("d" + std::to_string(i % 3), "m" + std::to_string(i % 4), std::to_string(i),
                      testing::random_prose(rng) + " Final words here. And more.");
  }
  const auto corpus = parse(content);
  const BigramCacheProvider mock;
  BenchmarkConfig serial;
  serial.max_inflight = 1;
  BenchmarkConfig parallel;
  parallel.max_inflight = 8;
  const auto a = run_benchmark(corpus, mock, resources(), serial);
  const auto b = run_benchmark(corpus, mock, resources(), parallel);
  CHECK(a.aggregates.values == b.aggregates.values);
}
