#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "narrametric/decay_fit.hpp"
#include "narrametric/lexical_metrics.hpp"
#include "narrametric/lm_scoring.hpp"
#include "narrametric/value.hpp"

namespace narrametric {

enum class Direction { kHigherIsBetter, kLowerIsBetter };

enum class MetricGroup { kStandard, kNarrativity };

// Column order of the summary table.
enum class MetricId {
  kPpl,
  kDist2,
  kTtr,
  kVr,
  kCd,
  kFdr,
  kCsr,
  kCecpr,
  kDcpr,
  kCcpr,
  kTtcpr,
  kVcpr,
};

inline constexpr std::size_t kMetricCount = 12;

struct MetricInfo {
  MetricId id;
  std::string_view name;   // machine name used in CSV files: "ppl", "dist2", ...
  std::string_view label;  // table header: "PPL", "Dist2", ...
  Direction direction;
  MetricGroup group;
};

std::span<const MetricInfo> all_metrics();
const MetricInfo& metric_info(MetricId id);
// Accepts the machine name or the label, case-insensitively.
std::optional<MetricId> metric_from_name(std::string_view name);

class MetricVector {
 public:
  MetricVector();

  const MetricValue& operator[](MetricId id) const { return values_[static_cast<std::size_t>(id)]; }
  MetricValue& operator[](MetricId id) { return values_[static_cast<std::size_t>(id)]; }

 private:
  std::vector<MetricValue> values_;
};

// Dist2^2 / ln(PPL); undefined when PPL <= 1 or Dist2 is undefined.
MetricValue fdr(const MetricValue& dist2, double ppl);

// Relative perplexity increase under sentence shuffling. Throws InputError
// unless both perplexities are positive.
double csr(double ppl_ordered, double ppl_shuffled);

// r / ratio^2, the shared form of the progression-rate metrics. Undefined when
// the ratio is zero or undefined.
MetricValue progression_rate(double r, const MetricValue& ratio);

inline MetricValue dcpr(double r, const MetricValue& dist2) { return progression_rate(r, dist2); }
inline MetricValue ccpr(double r, double cr) { return progression_rate(r, cr); }
inline MetricValue cecpr(double r, double cer) { return progression_rate(r, cer); }
inline MetricValue ttcpr(double r, double ttr) { return progression_rate(r, ttr); }
inline MetricValue vcpr(double r, double vr) { return progression_rate(r, vr); }

struct EvaluationConfig {
  int shuffles = 10;          // shuffled perplexity = mean over seeds seed..seed+shuffles-1
  std::uint64_t seed = 42;
  bool single_shuffle = false;  // one shuffle with `seed`
  FitOptions fit;
};

struct TextEvaluation {
  MetricVector metrics;
  SurfaceStats surface;
  std::size_t sentence_count = 0;
  double ppl = 0;
  std::optional<double> shuffled_ppl;
  std::vector<double> trajectory;
  OrUndefined<DecayFit> fit = Undefined{"not computed"};
};

// All twelve metrics for one text. Provider errors propagate; nothing partial
// is returned. Throws InputError for text without words.
TextEvaluation evaluate_text(std::string_view text, const LogprobProvider& provider,
                             const LanguageResources& resources, const EvaluationConfig& config);

}  // namespace narrametric
