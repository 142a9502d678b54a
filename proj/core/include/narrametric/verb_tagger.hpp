#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace narrametric {

// Marks which word tokens are verbs. Implementations must be deterministic.
class VerbTagger {
 public:
  virtual ~VerbTagger() = default;
  virtual std::vector<bool> tag(std::span<const std::string> words) const = 0;
};

// Lexicon and suffix rules with a little left context.
//
//  * auxiliaries and modals are verbs;
//  * nothing directly after a determiner is a verb;
//  * listed irregular forms and regular -s/-es/-ies/-ed/-d/-ied/-ing
//    inflections of a listed lemma are verbs;
//  * a bare lemma is a verb only after "to", a modal, do/does/did, a subject
//    pronoun (i, you, we, they) or a plural-looking noun ("factors outweigh").
class RuleVerbTagger final : public VerbTagger {
 public:
  RuleVerbTagger(std::span<const std::string> lemmas,
                 std::span<const std::string> irregular_forms,
                 std::span<const std::string> auxiliaries);

  static std::shared_ptr<const RuleVerbTagger> with_defaults();

  std::vector<bool> tag(std::span<const std::string> words) const override;

  bool is_lemma(std::string_view word) const;
  // Irregular form or regular inflection of a lemma.
  bool is_inflected_form(std::string_view word) const;

 private:
  std::unordered_set<std::string> lemmas_;
  std::unordered_set<std::string> irregular_;
  std::unordered_set<std::string> auxiliaries_;
};

}  // namespace narrametric
