#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace narrametric::resources {

// One entry per line; blank lines and lines starting with '#' are skipped;
// entries are trimmed. Duplicates are kept in first-seen order only once.
std::vector<std::string> parse_phrase_list(std::string_view content);

// Throws InputError when the file cannot be read.
std::vector<std::string> load_phrase_list(const std::filesystem::path& path);

// Shipped lists compiled into the library.
std::vector<std::string> default_abbreviations();
std::vector<std::string> default_auxiliaries();
std::vector<std::string> default_cause_effect_markers();
std::vector<std::string> default_connectives();
std::vector<std::string> default_verb_lemmas();
std::vector<std::string> default_verb_forms();

}  // namespace narrametric::resources
