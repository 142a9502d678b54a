#include "narrametric/perturbations.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

#include "json.hpp"
#include "narrametric/error.hpp"

namespace narrametric {

namespace {

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::uint64_t SplitMix64::next() {
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<std::size_t> shuffle_permutation(std::size_t n, std::uint64_t seed) {
  if (n < 2) throw InputError("nothing to shuffle");
  SplitMix64 rng(seed);
  std::vector<std::size_t> order(n);
  while (true) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = n - 1; i >= 1; --i) {
      const std::size_t j = static_cast<std::size_t>(rng.next() % (i + 1));
      std::swap(order[i], order[j]);
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (order[i] != i) return order;
    }
  }
}

std::vector<std::string> shuffle_sentences(std::span<const std::string> sentences, std::uint64_t seed) {
  const auto order = shuffle_permutation(sentences.size(), seed);
  std::vector<std::string> out;
  out.reserve(order.size());
  for (std::size_t i : order) out.push_back(sentences[i]);
  return out;
}

std::vector<std::string> reverse_sentences(std::span<const std::string> sentences) {
  if (sentences.size() < 2) throw InputError("nothing to reverse");
  return {sentences.rbegin(), sentences.rend()};
}

std::vector<std::string> leave_one_out(std::span<const std::string> sentences, std::size_t index) {
  if (index >= sentences.size()) {
    throw InputError("sentence index " + std::to_string(index) + " out of range for " +
                     std::to_string(sentences.size()) + " sentences");
  }
  std::vector<std::string> out;
  out.reserve(sentences.size() - 1);
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    if (i != index) out.push_back(sentences[i]);
  }
  return out;
}

std::vector<double> PerturbationReport::loo_deltas() const {
  std::vector<double> out;
  out.reserve(loo_ppls.size());
  for (double v : loo_ppls) out.push_back(v - original_ppl);
  return out;
}

PerturbationReport perturbation_report(std::string_view raw, const LogprobProvider& provider,
                                       std::uint64_t seed, const text::SentenceSplitter& splitter,
                                       bool with_trajectories) {
  const std::vector<std::string> sentences = splitter.split(raw);
  if (sentences.size() < 2) throw InputError("perturbations need at least two sentences");

  PerturbationReport report;
  report.sentence_count = sentences.size();
  report.seed = seed;
  report.shuffle_order = shuffle_permutation(sentences.size(), seed);
  std::vector<std::string> shuffled;
  for (std::size_t i : report.shuffle_order) shuffled.push_back(sentences[i]);
  const auto reversed = reverse_sentences(sentences);

  report.original_ppl = text_perplexity(provider, text::join_sentences(sentences));
  report.shuffled_ppl = text_perplexity(provider, text::join_sentences(shuffled));
  report.reversed_ppl = text_perplexity(provider, text::join_sentences(reversed));
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    report.loo_ppls.push_back(text_perplexity(provider, text::join_sentences(leave_one_out(sentences, i))));
  }
  if (with_trajectories) {
    report.trajectories = PerturbationTrajectories{cumulative_trajectory(provider, sentences),
                                                   cumulative_trajectory(provider, shuffled),
                                                   cumulative_trajectory(provider, reversed)};
  }
  return report;
}

std::string to_json(const PerturbationReport& report) {
  nlohmann::ordered_json doc;
  doc["sentence_count"] = report.sentence_count;
  doc["seed"] = report.seed;
  doc["shuffle_order"] = report.shuffle_order;
  doc["original_ppl"] = report.original_ppl;
  doc["shuffled"] = {{"ppl", report.shuffled_ppl}, {"delta", report.shuffled_delta()}};
  doc["reversed"] = {{"ppl", report.reversed_ppl}, {"delta", report.reversed_delta()}};
  auto loo = nlohmann::ordered_json::array();
  const auto deltas = report.loo_deltas();
  for (std::size_t i = 0; i < report.loo_ppls.size(); ++i) {
    loo.push_back({{"index", i}, {"ppl", report.loo_ppls[i]}, {"delta", deltas[i]}});
  }
  doc["leave_one_out"] = std::move(loo);
  if (report.trajectories) {
    doc["trajectories"] = {{"original", report.trajectories->original},
                           {"shuffled", report.trajectories->shuffled},
                           {"reversed", report.trajectories->reversed}};
  }
  return doc.dump(2) + "\n";
}

std::string to_csv(const PerturbationReport& report) {
  std::string out = "perturbation,index,ppl,delta\n";
  auto row = [&](const std::string& kind, const std::string& index, double ppl, double delta) {
    out += kind + "," + index + "," + number(ppl) + "," + number(delta) + "\n";
  };
  row("original", "", report.original_ppl, 0.0);
  row("shuffled", "", report.shuffled_ppl, report.shuffled_delta());
  row("reversed", "", report.reversed_ppl, report.reversed_delta());
  const auto deltas = report.loo_deltas();
  for (std::size_t i = 0; i < report.loo_ppls.size(); ++i) {
    row("leave_one_out", std::to_string(i), report.loo_ppls[i], deltas[i]);
  }
  return out;
}

}  // namespace narrametric
