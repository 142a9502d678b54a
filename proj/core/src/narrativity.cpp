#include "narrametric/narrativity.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>

#include "narrametric/error.hpp"
#include "narrametric/perturbations.hpp"

namespace narrametric {

namespace {

constexpr auto kUp = Direction::kHigherIsBetter;
constexpr auto kDown = Direction::kLowerIsBetter;
constexpr auto kStd = MetricGroup::kStandard;
constexpr auto kNar = MetricGroup::kNarrativity;

constexpr std::array<MetricInfo, kMetricCount> kMetrics = {{
    {MetricId::kPpl, "ppl", "PPL", kDown, kStd},
    {MetricId::kDist2, "dist2", "Dist2", kUp, kStd},
    {MetricId::kTtr, "ttr", "TTR", kUp, kStd},
    {MetricId::kVr, "vr", "VR", kUp, kStd},
    {MetricId::kCd, "cd", "CD", kUp, kStd},
    {MetricId::kFdr, "fdr", "FDR", kUp, kNar},
    {MetricId::kCsr, "csr", "CSR", kUp, kNar},
    {MetricId::kCecpr, "cecpr", "CECPR", kDown, kNar},
    {MetricId::kDcpr, "dcpr", "DCPR", kDown, kNar},
    {MetricId::kCcpr, "ccpr", "CCPR", kDown, kNar},
    {MetricId::kTtcpr, "ttcpr", "TTCPR", kDown, kNar},
    {MetricId::kVcpr, "vcpr", "VCPR", kDown, kNar},
}};

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
         });
}

double shuffled_perplexity(const std::vector<std::string>& sentences, const LogprobProvider& provider,
                           const EvaluationConfig& config) {
  const int rounds = config.single_shuffle ? 1 : config.shuffles;
  if (rounds < 1) throw InputError("shuffle count must be at least 1");
  double total = 0;
  for (int i = 0; i < rounds; ++i) {
    const auto shuffled = shuffle_sentences(sentences, config.seed + static_cast<std::uint64_t>(i));
    total += text_perplexity(provider, text::join_sentences(shuffled));
  }
  return total / rounds;
}

}  // namespace

std::span<const MetricInfo> all_metrics() { return kMetrics; }

const MetricInfo& metric_info(MetricId id) { return kMetrics[static_cast<std::size_t>(id)]; }

std::optional<MetricId> metric_from_name(std::string_view name) {
  for (const MetricInfo& info : kMetrics) {
    if (iequals(name, info.name) || iequals(name, info.label)) return info.id;
  }
  return std::nullopt;
}

MetricVector::MetricVector() : values_(kMetricCount, MetricValue(Undefined{"not computed"})) {}

MetricValue fdr(const MetricValue& dist2, double ppl) {
  if (!dist2) return Undefined{dist2.reason()};
  if (!(ppl > 1.0)) return Undefined{"degenerate predictability"};
  return (*dist2 * *dist2) / std::log(ppl);
}

double csr(double ppl_ordered, double ppl_shuffled) {
  if (!(ppl_ordered > 0) || !(ppl_shuffled > 0)) throw InputError("perplexities must be positive");
  return (ppl_shuffled - ppl_ordered) / ppl_ordered;
}

MetricValue progression_rate(double r, const MetricValue& ratio) {
  if (!ratio) return Undefined{ratio.reason()};
  if (*ratio <= 0) return Undefined{"zero ratio (division by zero)"};
  return r / (*ratio * *ratio);
}

TextEvaluation evaluate_text(std::string_view raw, const LogprobProvider& provider,
                             const LanguageResources& resources, const EvaluationConfig& config) {
  const auto text = text::ExplanationText::from_raw(raw, resources.splitter);
  if (text.words.empty()) throw InputError("empty text");

  TextEvaluation out;
  out.surface = surface_stats(text, resources);
  out.sentence_count = text.sentences.size();
  out.ppl = text_perplexity(provider, text.joined());
  if (text.sentences.size() >= 2) out.shuffled_ppl = shuffled_perplexity(text.sentences, provider, config);
  out.trajectory = cumulative_trajectory(provider, text.sentences);
  out.fit = fit_decay(out.trajectory, config.fit);

  MetricVector& m = out.metrics;
  const SurfaceStats& s = out.surface;
  m[MetricId::kPpl] = out.ppl;
  m[MetricId::kDist2] = s.dist2;
  m[MetricId::kTtr] = s.ttr;
  m[MetricId::kVr] = s.vr;
  m[MetricId::kCd] = s.cr;
  m[MetricId::kFdr] = fdr(s.dist2, out.ppl);
  m[MetricId::kCsr] = out.shuffled_ppl ? MetricValue(csr(out.ppl, *out.shuffled_ppl))
                                       : MetricValue(Undefined{"needs at least two sentences"});
  if (out.fit) {
    const double r = out.fit->rate;
    m[MetricId::kCecpr] = cecpr(r, s.cer);
    m[MetricId::kDcpr] = dcpr(r, s.dist2);
    m[MetricId::kCcpr] = ccpr(r, s.cr);
    m[MetricId::kTtcpr] = ttcpr(r, s.ttr);
    m[MetricId::kVcpr] = vcpr(r, s.vr);
  } else {
    for (MetricId id : {MetricId::kCecpr, MetricId::kDcpr, MetricId::kCcpr, MetricId::kTtcpr, MetricId::kVcpr}) {
      m[id] = Undefined{out.fit.reason()};
    }
  }
  return out;
}

}  // namespace narrametric
