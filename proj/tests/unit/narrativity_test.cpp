#include "narrametric/narrativity.hpp"

#include <cmath>
#include <random>

#include "doctest.h"
#include "narrametric/error.hpp"
#include "test_support.hpp"

using namespace narrametric;

namespace {

const LanguageResources& resources() {
  static const LanguageResources r = LanguageResources::defaults();
  return r;
}

EvaluationConfig single_shuffle() {
  EvaluationConfig config;
  config.single_shuffle = true;
  return config;
}

const char* kChained = "w1 w2 w1. W2 w3 w2. W3 w4 w3. W4 w5 w4.";
const char* kDisjoint = "Alpha alpha alpha. Beta beta beta. Gamma gamma gamma. Delta delta delta.";

}  // namespace

TEST_CASE("metric catalogue follows the summary column order") {
  const auto metrics = all_metrics();
  REQUIRE(metrics.size() == kMetricCount);
  const std::vector<std::string_view> labels = {"PPL",   "Dist2", "TTR",  "VR",   "CD",    "FDR",
                                                "CSR",   "CECPR", "DCPR", "CCPR", "TTCPR", "VCPR"};
  for (std::size_t i = 0; i < kMetricCount; ++i) CHECK(metrics[i].label == labels[i]);
  CHECK(metric_info(MetricId::kPpl).direction == Direction::kLowerIsBetter);
  CHECK(metric_info(MetricId::kCsr).direction == Direction::kHigherIsBetter);
  CHECK(metric_info(MetricId::kVcpr).direction == Direction::kLowerIsBetter);
  CHECK(metric_info(MetricId::kCd).group == MetricGroup::kStandard);
  CHECK(metric_info(MetricId::kFdr).group == MetricGroup::kNarrativity);
  CHECK(metric_from_name("ttcpr") == MetricId::kTtcpr);
  CHECK(metric_from_name("Dist2") == MetricId::kDist2);
  CHECK_FALSE(metric_from_name("bleu").has_value());
}

TEST_CASE("fdr by hand") {
  CHECK(fdr(0.5, std::exp(1.0)).value() == doctest::Approx(0.25));
  CHECK(fdr(0.9, std::exp(2.0)).value() == doctest::Approx(0.405));
  CHECK(fdr(0.5, 1.0).reason() == "degenerate predictability");
  CHECK(fdr(0.5, 0.9).reason() == "degenerate predictability");
  CHECK(fdr(Undefined{"too short to measure diversity"}, 5.0).reason() == "too short to measure diversity");
}

TEST_CASE("csr by hand") {
  CHECK(csr(10.0, 15.0) == doctest::Approx(0.5));
  CHECK(csr(7.0, 7.0) == 0.0);
  CHECK(csr(10.0, 8.0) == doctest::Approx(-0.2));
  CHECK_THROWS_AS(csr(0.0, 3.0), InputError);
  CHECK_THROWS_AS(csr(3.0, -1.0), InputError);
}

TEST_CASE("progression rates by hand") {
  CHECK(progression_rate(0.2, 0.5).value() == doctest::Approx(0.8));
  CHECK(ccpr(0.15, 0.1).value() == doctest::Approx(15.0));
  CHECK(cecpr(0.15, 0.0).reason() == "zero ratio (division by zero)");
  CHECK(dcpr(0.15, Undefined{"too short to measure diversity"}).reason() == "too short to measure diversity");
}

TEST_CASE("property: progression rates fall as the ratio grows and rise with r") {
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> unit(0.001, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const double r = unit(rng), lo = unit(rng), hi = unit(rng);
    if (lo == hi) continue;
    const double a = std::min(lo, hi), b = std::max(lo, hi);
    // Equal r: the text with the lower ratio has the strictly higher CPR.
    CHECK(cecpr(r, a).value() > cecpr(r, b).value());
    CHECK(ccpr(r, a).value() > ccpr(r, b).value());
    CHECK(vcpr(a, lo).value() < vcpr(b, lo).value());
  }
}

TEST_CASE("gaming text against the narrative at equal r") {
  const auto text_stats = [](const std::string& raw) {
    return surface_stats(text::ExplanationText::from_raw(raw), resources());
  };
  const auto narrative = text_stats(testing::narrative());
  const auto gaming = text_stats(testing::gaming());
  CHECK(gaming.dist2.value() == doctest::Approx(0.94).epsilon(0.03 / 0.94));
  CHECK(gaming.ttr == doctest::Approx(0.58).epsilon(0.03 / 0.58));
  const double r = 0.151369;
  REQUIRE(cecpr(r, gaming.cer).defined());
  REQUIRE(ccpr(r, gaming.cr).defined());
  // The gaming text stuffs markers, so its ratios are higher and its CPRs lower.
  CHECK(gaming.cer > narrative.cer);
  CHECK(cecpr(r, gaming.cer).value() < cecpr(r, narrative.cer).value());
  CHECK(gaming.ttr < narrative.ttr);
  CHECK(ttcpr(r, gaming.ttr).value() > ttcpr(r, narrative.ttr).value());
}

TEST_CASE("single-sentence texts leave CSR and every CPR undefined") {
  BigramCacheProvider mock;
  const auto result = evaluate_text("Only one sentence here.", mock, resources(), {});
  CHECK(result.sentence_count == 1);
  CHECK(result.trajectory.size() == 1);
  CHECK(result.trajectory[0] == doctest::Approx(result.ppl));
  CHECK(result.metrics[MetricId::kCsr].reason() == "needs at least two sentences");
  for (MetricId id : {MetricId::kCecpr, MetricId::kDcpr, MetricId::kCcpr, MetricId::kTtcpr, MetricId::kVcpr}) {
    CHECK(result.metrics[id].reason() == "too few sentences to fit");
  }
  CHECK(result.metrics[MetricId::kPpl].defined());
  CHECK(result.metrics[MetricId::kTtr].defined());
}

TEST_CASE("empty text is an input error") {
  BigramCacheProvider mock;
  CHECK_THROWS_AS(evaluate_text("", mock, resources(), {}), InputError);
  CHECK_THROWS_AS(evaluate_text("  ... ", mock, resources(), {}), InputError);
}

TEST_CASE("mock CSR on the chained fixture") {
  BigramCacheProvider mock;
  const auto chained = evaluate_text(kChained, mock, resources(), single_shuffle());
  // Trajectory by hand: 3, 6, 9, 12 tokens with 3, 5, 7, 9 fresh events.
  const std::vector<double> expected = {
      1000.0, std::pow(1e-15 * 0.5, -1.0 / 6.0), std::pow(1e-21 * 0.25, -1.0 / 9.0),
      std::pow(1e-27 * 0.125, -1.0 / 12.0)};
  REQUIRE(chained.trajectory.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) CHECK(chained.trajectory[i] == doctest::Approx(expected[i]));
  CHECK(chained.metrics[MetricId::kCsr].value() > 0);
  CHECK(evaluate_text(kChained, mock, resources(), {}).metrics[MetricId::kCsr].value() > 0);
}

TEST_CASE("mock CSR on the disjoint fixture") {
  BigramCacheProvider mock;
  for (const auto& config : {EvaluationConfig{}, single_shuffle()}) {
    const auto result = evaluate_text(kDisjoint, mock, resources(), config);
    CHECK(std::abs(result.metrics[MetricId::kCsr].value()) < 0.05);
  }
}

TEST_CASE("shuffle count and seed control the provider calls") {
  auto mock = std::make_shared<BigramCacheProvider>();
  const testing::CountingProvider counting(mock);
  evaluate_text(kChained, counting, resources(), {});
  // Whole text, ten shuffles, four prefixes.
  CHECK(counting.calls() == 1 + 10 + 4);
  const testing::CountingProvider single(mock);
  evaluate_text(kChained, single, resources(), single_shuffle());
  CHECK(single.calls() == 1 + 1 + 4);
  EvaluationConfig zero;
  zero.shuffles = 0;
  CHECK_THROWS_AS(evaluate_text(kChained, counting, resources(), zero), InputError);
}

TEST_CASE("worked example through the scripted provider") {
  const auto provider = ScriptedProvider::from_json_file(testing::fixture("worked_example_script.json"));
  const auto nar = evaluate_text(testing::narrative(), *provider, resources(), single_shuffle());
  CHECK(nar.ppl == doctest::Approx(15.10));
  CHECK(*nar.shuffled_ppl == doctest::Approx(22.89));
  CHECK(nar.metrics[MetricId::kFdr].value() == doctest::Approx(0.31).epsilon(0.01 / 0.31));
  CHECK(nar.metrics[MetricId::kCsr].value() == doctest::Approx(0.52).epsilon(0.01 / 0.52));
  CHECK(nar.metrics[MetricId::kDcpr].value() == doctest::Approx(0.18).epsilon(0.01 / 0.18));
  CHECK(nar.metrics[MetricId::kTtcpr].value() == doctest::Approx(0.37).epsilon(0.01 / 0.37));

  const auto desc = evaluate_text(testing::description(), *provider, resources(), single_shuffle());
  CHECK(desc.metrics[MetricId::kCecpr].reason() == "zero ratio (division by zero)");
  CHECK(desc.metrics[MetricId::kCsr].value() == doctest::Approx(0.40).epsilon(0.01 / 0.40));
  CHECK(desc.metrics[MetricId::kTtcpr].value() == doctest::Approx(0.80).epsilon(0.01 / 0.80));
}

TEST_CASE("provider failures propagate without partial results") {
  ScriptedProvider empty;
  CHECK_THROWS_AS(evaluate_text("One. Two. Three.", empty, resources(), {}), ProviderError);
}
