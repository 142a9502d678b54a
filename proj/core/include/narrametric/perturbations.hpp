#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "narrametric/lexical_metrics.hpp"
#include "narrametric/lm_scoring.hpp"

namespace narrametric {

// splitmix64, pinned so shuffles are reproducible in any language.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();

 private:
  std::uint64_t state_;
};

// Fisher-Yates from the back (j = next() % (i + 1) for i = n-1..1). An identity
// result is discarded and the same generator draws again.
// Throws InputError("nothing to shuffle") for n < 2.
std::vector<std::size_t> shuffle_permutation(std::size_t n, std::uint64_t seed);

std::vector<std::string> shuffle_sentences(std::span<const std::string> sentences,
                                           std::uint64_t seed);
// Throws InputError for fewer than 2 sentences.
std::vector<std::string> reverse_sentences(std::span<const std::string> sentences);
// Throws InputError when index is out of range.
std::vector<std::string> leave_one_out(std::span<const std::string> sentences, std::size_t index);

struct PerturbationTrajectories {
  std::vector<double> original;
  std::vector<double> shuffled;
  std::vector<double> reversed;
};

struct PerturbationReport {
  std::size_t sentence_count = 0;
  std::uint64_t seed = 0;
  std::vector<std::size_t> shuffle_order;
  double original_ppl = 0;
  double shuffled_ppl = 0;
  double reversed_ppl = 0;
  std::vector<double> loo_ppls;  // loo_ppls[i]: sentence i removed
  std::optional<PerturbationTrajectories> trajectories;

  double shuffled_delta() const { return shuffled_ppl - original_ppl; }
  double reversed_delta() const { return reversed_ppl - original_ppl; }
  std::vector<double> loo_deltas() const;
};

// Throws InputError for texts with fewer than 2 sentences.
PerturbationReport perturbation_report(std::string_view text, const LogprobProvider& provider,
                                       std::uint64_t seed,
                                       const text::SentenceSplitter& splitter = text::default_splitter(),
                                       bool with_trajectories = false);

std::string to_json(const PerturbationReport& report);
// Long form: perturbation,index,ppl,delta
std::string to_csv(const PerturbationReport& report);

}  // namespace narrametric
