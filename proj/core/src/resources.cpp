#include "narrametric/resources.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include "narrametric/error.hpp"

namespace narrametric::resources {

namespace embedded {
extern const std::string_view k_abbreviations;
extern const std::string_view k_auxiliaries;
extern const std::string_view k_cause_effect;
extern const std::string_view k_connectives;
extern const std::string_view k_verb_forms;
extern const std::string_view k_verbs;
}  // namespace embedded

namespace {

std::string_view trim(std::string_view s) {
  constexpr std::string_view kSpace = " \t\r\n\f\v";
  const auto first = s.find_first_not_of(kSpace);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(kSpace);
  return s.substr(first, last - first + 1);
}

}  // namespace

std::vector<std::string> parse_phrase_list(std::string_view content) {
  std::vector<std::string> entries;
  std::unordered_set<std::string> seen;
  while (!content.empty()) {
    const auto eol = content.find('\n');
    const std::string_view line = trim(content.substr(0, eol));
    content = eol == std::string_view::npos ? std::string_view{} : content.substr(eol + 1);
    if (line.empty() || line.front() == '#') continue;
    std::string entry(line);
    if (seen.insert(entry).second) entries.push_back(std::move(entry));
  }
  return entries;
}

std::vector<std::string> load_phrase_list(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read word list " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_phrase_list(buffer.str());
}

std::vector<std::string> default_abbreviations() { return parse_phrase_list(embedded::k_abbreviations); }
std::vector<std::string> default_auxiliaries() { return parse_phrase_list(embedded::k_auxiliaries); }
std::vector<std::string> default_cause_effect_markers() { return parse_phrase_list(embedded::k_cause_effect); }
std::vector<std::string> default_connectives() { return parse_phrase_list(embedded::k_connectives); }
std::vector<std::string> default_verb_lemmas() { return parse_phrase_list(embedded::k_verbs); }
std::vector<std::string> default_verb_forms() { return parse_phrase_list(embedded::k_verb_forms); }

}  // namespace narrametric::resources
