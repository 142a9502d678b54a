#pragma once

#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace narrametric::text {

// Unicode NFC. Invalid UTF-8 sequences are replaced with U+FFFD.
std::string normalize_nfc(std::string_view text);

// Word tokens: NFC, split on Unicode whitespace, leading/trailing punctuation
// and symbols stripped (a sign directly before a digit is kept), case-folded.
// Internal hyphens, apostrophes and digit separators stay inside the token,
// so "3,632" and "0.13" are single tokens. Chunks with no letter or digit are
// dropped.
std::vector<std::string> tokenize_words(std::string_view text);

// The word stream used as the denominator of every lexical ratio: tokens
// without a letter (numbers, feature values) are removed and a trailing
// possessive 's is cut, so "applicant's" counts as "applicant".
std::vector<std::string> lexical_words(std::span<const std::string> words);

// Case-folded whitespace chunks with punctuation left attached ("risk." and
// "risk" differ). Chunks with no letter or digit are dropped. Distinct-n is
// measured on this stream.
std::vector<std::string> surface_tokens(std::string_view text);

// Rule-based sentence segmentation.
//
// A boundary is placed after a run of '.', '!' or '?' (plus any closing
// quotes or brackets) when it is followed by whitespace and then an uppercase
// letter, an opening quote or a digit. A single '.' ending a listed
// abbreviation never ends a sentence. Sentences are trimmed; empty ones are
// dropped; text without a boundary is a single sentence.
class SentenceSplitter {
 public:
  // Uses the shipped abbreviation list.
  SentenceSplitter();
  // Entries are matched case-insensitively and must include the final period.
  explicit SentenceSplitter(std::span<const std::string> abbreviations);

  std::vector<std::string> split(std::string_view text) const;

  bool is_abbreviation(std::string_view token) const;

 private:
  std::unordered_set<std::string> abbreviations_;
};

const SentenceSplitter& default_splitter();

std::vector<std::string> split_sentences(std::string_view text);

// Prefix texts are rebuilt by joining sentences with one space.
std::string join_sentences(std::span<const std::string> sentences);

struct ExplanationText {
  std::string raw;                      // NFC-normalized input
  std::vector<std::string> sentences;
  std::vector<std::string> words;       // tokenize_words(raw)

  static ExplanationText from_raw(std::string_view raw,
                                  const SentenceSplitter& splitter = default_splitter());

  // Canonical form sent to a scorer: the sentences joined with single spaces.
  std::string joined() const { return join_sentences(sentences); }
};

}  // namespace narrametric::text
