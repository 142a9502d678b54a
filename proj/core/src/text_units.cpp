#include "narrametric/text_units.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <stdexcept>

#include "narrametric/resources.hpp"

namespace narrametric::text {

namespace {

using CodePoints = std::u32string;

CodePoints decode(std::string_view utf8) {
  CodePoints out;
  out.reserve(utf8.size());
  int32_t i = 0;
  const auto length = static_cast<int32_t>(utf8.size());
  while (i < length) {
    UChar32 c;
    U8_NEXT(utf8.data(), i, length, c);
    out.push_back(c < 0 ? 0xFFFD : static_cast<char32_t>(c));
  }
  return out;
}

std::string encode(const char32_t* begin, const char32_t* end) {
  std::string out;
  out.reserve(static_cast<std::size_t>(end - begin));
  for (const char32_t* p = begin; p != end; ++p) {
    uint8_t buf[U8_MAX_LENGTH];
    int32_t n = 0;
    U8_APPEND_UNSAFE(buf, n, static_cast<UChar32>(*p));
    out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(n));
  }
  return out;
}

std::string fold(const char32_t* begin, const char32_t* end) {
  auto s = icu::UnicodeString::fromUTF32(reinterpret_cast<const UChar32*>(begin),
                                         static_cast<int32_t>(end - begin));
  s.foldCase();
  std::string out;
  s.toUTF8String(out);
  return out;
}

bool is_space(char32_t c) { return u_isUWhiteSpace(static_cast<UChar32>(c)); }

bool is_alnum(char32_t c) { return u_isalnum(static_cast<UChar32>(c)); }

bool is_letter(char32_t c) { return u_isalpha(static_cast<UChar32>(c)); }

bool is_digit(char32_t c) { return u_isdigit(static_cast<UChar32>(c)); }

bool is_punct_or_symbol(char32_t c) {
  const auto mask = U_GET_GC_MASK(static_cast<UChar32>(c));
  return (mask & (U_GC_P_MASK | U_GC_S_MASK)) != 0;
}

bool is_sign(char32_t c) { return c == U'+' || c == U'-' || c == U'−'; }

bool is_terminator(char32_t c) { return c == U'.' || c == U'!' || c == U'?'; }

bool is_closer(char32_t c) {
  switch (c) {
    case U'"': case U'\'': case U')': case U']': case U'”': case U'’': case U'»':
      return true;
    default:
      return false;
  }
}

bool is_opening_quote(char32_t c) {
  switch (c) {
    case U'"': case U'\'': case U'“': case U'‘': case U'«': case U'„':
      return true;
    default:
      return false;
  }
}

bool starts_sentence(char32_t c) {
  const auto u = static_cast<UChar32>(c);
  return u_isupper(u) || u_istitle(u) || is_opening_quote(c) || is_digit(c);
}

template <typename Fn>
void for_each_chunk(const CodePoints& cps, Fn&& fn) {
  std::size_t i = 0;
  while (i < cps.size()) {
    while (i < cps.size() && is_space(cps[i])) ++i;
    std::size_t j = i;
    while (j < cps.size() && !is_space(cps[j])) ++j;
    if (j > i) fn(cps.data() + i, cps.data() + j);
    i = j;
  }
}

bool has_alnum(const char32_t* begin, const char32_t* end) {
  for (const char32_t* p = begin; p != end; ++p) {
    if (is_alnum(*p)) return true;
  }
  return false;
}

std::string trim_copy(std::string_view s) {
  const CodePoints cps = decode(s);
  std::size_t b = 0, e = cps.size();
  while (b < e && is_space(cps[b])) ++b;
  while (e > b && is_space(cps[e - 1])) --e;
  return encode(cps.data() + b, cps.data() + e);
}

}  // namespace

std::string normalize_nfc(std::string_view text) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw std::runtime_error("ICU NFC normalizer unavailable");
  const auto source = icu::UnicodeString::fromUTF8(icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  const icu::UnicodeString normalized = nfc->normalize(source, status);
  if (U_FAILURE(status)) throw std::runtime_error("NFC normalization failed");
  std::string out;
  normalized.toUTF8String(out);
  return out;
}

std::vector<std::string> tokenize_words(std::string_view text) {
  const CodePoints cps = decode(normalize_nfc(text));
  std::vector<std::string> words;
  for_each_chunk(cps, [&](const char32_t* begin, const char32_t* end) {
    while (begin != end && is_punct_or_symbol(*begin)) {
      if (is_sign(*begin) && begin + 1 != end && is_digit(begin[1])) break;
      ++begin;
    }
    while (end != begin && is_punct_or_symbol(end[-1])) --end;
    if (begin == end || !has_alnum(begin, end)) return;
    words.push_back(fold(begin, end));
  });
  return words;
}

std::vector<std::string> lexical_words(std::span<const std::string> words) {
  std::vector<std::string> out;
  out.reserve(words.size());
  for (const std::string& word : words) {
    std::string w = word;
    for (std::string_view clitic : {std::string_view("'s"), std::string_view("’s")}) {
      if (w.size() > clitic.size() && w.compare(w.size() - clitic.size(), clitic.size(), clitic) == 0) {
        w.resize(w.size() - clitic.size());
        break;
      }
    }
    const CodePoints cps = decode(w);
    bool letter = false;
    for (char32_t c : cps) letter = letter || is_letter(c);
    if (letter) out.push_back(std::move(w));
  }
  return out;
}

std::vector<std::string> surface_tokens(std::string_view text) {
  const CodePoints cps = decode(normalize_nfc(text));
  std::vector<std::string> tokens;
  for_each_chunk(cps, [&](const char32_t* begin, const char32_t* end) {
    if (has_alnum(begin, end)) tokens.push_back(fold(begin, end));
  });
  return tokens;
}

SentenceSplitter::SentenceSplitter() : SentenceSplitter(resources::default_abbreviations()) {}

SentenceSplitter::SentenceSplitter(std::span<const std::string> abbreviations) {
  for (const std::string& entry : abbreviations) {
    const CodePoints cps = decode(normalize_nfc(entry));
    abbreviations_.insert(fold(cps.data(), cps.data() + cps.size()));
  }
}

bool SentenceSplitter::is_abbreviation(std::string_view token) const {
  const CodePoints cps = decode(normalize_nfc(token));
  return abbreviations_.count(fold(cps.data(), cps.data() + cps.size())) > 0;
}

std::vector<std::string> SentenceSplitter::split(std::string_view text) const {
  const CodePoints cps = decode(normalize_nfc(text));
  const std::size_t n = cps.size();
  std::vector<std::string> sentences;
  auto emit = [&](std::size_t begin, std::size_t end) {
    std::string sentence = trim_copy(encode(cps.data() + begin, cps.data() + end));
    if (!sentence.empty()) sentences.push_back(std::move(sentence));
  };

  std::size_t start = 0;
  std::size_t i = 0;
  while (i < n) {
    if (!is_terminator(cps[i])) {
      ++i;
      continue;
    }
    const std::size_t run_begin = i;
    while (i < n && is_terminator(cps[i])) ++i;
    const std::size_t run_end = i;
    while (i < n && is_closer(cps[i])) ++i;
    const std::size_t end = i;
    if (end >= n || !is_space(cps[end])) continue;
    std::size_t next = end;
    while (next < n && is_space(cps[next])) ++next;
    if (next >= n || !starts_sentence(cps[next])) continue;

    if (run_end - run_begin == 1 && cps[run_begin] == U'.') {
      std::size_t tok = run_begin;
      while (tok > start && !is_space(cps[tok - 1])) --tok;
      while (tok < run_begin && (is_opening_quote(cps[tok]) || cps[tok] == U'(' || cps[tok] == U'[')) ++tok;
      if (abbreviations_.count(fold(cps.data() + tok, cps.data() + run_end)) > 0) continue;
    }
    emit(start, end);
    start = next;
    i = next;
  }
  emit(start, n);
  return sentences;
}

const SentenceSplitter& default_splitter() {
  static const SentenceSplitter splitter;
  return splitter;
}

std::vector<std::string> split_sentences(std::string_view text) { return default_splitter().split(text); }

std::string join_sentences(std::span<const std::string> sentences) {
  std::string out;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    if (i > 0) out += ' ';
    out += sentences[i];
  }
  return out;
}

ExplanationText ExplanationText::from_raw(std::string_view raw, const SentenceSplitter& splitter) {
  ExplanationText text;
  text.raw = normalize_nfc(raw);
  text.sentences = splitter.split(text.raw);
  text.words = tokenize_words(text.raw);
  return text;
}

}  // namespace narrametric::text
