#include "narrametric/score_cache.hpp"

#include <openssl/evp.h>
#include <spdlog/spdlog.h>

#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "narrametric/error.hpp"

namespace narrametric {

CachedProvider::CachedProvider(std::shared_ptr<const LogprobProvider> inner, CacheOptions options)
    : inner_(std::move(inner)), options_(std::move(options)) {
  if (!inner_) throw InputError("cache needs a provider");
}

std::string CachedProvider::cache_key(std::string_view identity, std::string_view text) {
  std::string material(identity);
  material.push_back('\0');
  material.append(text);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(material.data(), material.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    hex.push_back(kHex[digest[i] >> 4]);
    hex.push_back(kHex[digest[i] & 0xf]);
  }
  return hex;
}

ScoredText CachedProvider::score(std::string_view text) const {
  if (!options_.enabled) {
    ++misses_;
    return inner_->score(text);
  }
  const std::string identity = inner_->identity();
  const std::string key = cache_key(identity, text);
  {
    std::lock_guard<std::mutex> lock(mutex_);
    const auto it = memory_.find(key);
    if (it != memory_.end()) {
      ++hits_;
      return it->second;
    }
  }
  if (auto stored = read_disk(key, identity, text)) {
    ++hits_;
    std::lock_guard<std::mutex> lock(mutex_);
    memory_.emplace(key, *stored);
    return *stored;
  }
  ++misses_;
  ScoredText scored = inner_->score(text);
  write_disk(key, identity, text, scored);
  std::lock_guard<std::mutex> lock(mutex_);
  memory_.emplace(key, scored);
  return scored;
}

std::optional<ScoredText> CachedProvider::read_disk(const std::string& key, std::string_view identity,
                                                    std::string_view text) const {
  if (!options_.directory) return std::nullopt;
  const auto path = *options_.directory / (key + ".json");
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) return std::nullopt;
  try {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open");
    const auto doc = nlohmann::json::parse(in);
    if (doc.at("identity").get<std::string>() != identity || doc.at("text").get<std::string>() != text) {
      return std::nullopt;
    }
    ScoredText scored;
    scored.model = doc.at("model").get<std::string>();
    scored.tokens = doc.at("tokens").get<std::vector<std::string>>();
    for (const auto& lp : doc.at("logprobs")) {
      scored.logprobs.push_back(lp.is_null() ? std::optional<double>() : std::optional<double>(lp.get<double>()));
    }
    if (scored.tokens.size() != scored.logprobs.size()) throw std::runtime_error("length mismatch");
    return scored;
  } catch (const std::exception& e) {
    spdlog::warn("ignoring unreadable cache entry {}: {}", path.string(), e.what());
    return std::nullopt;
  }
}

void CachedProvider::write_disk(const std::string& key, std::string_view identity, std::string_view text,
                                const ScoredText& scored) const {
  if (!options_.directory) return;
  const auto path = *options_.directory / (key + ".json");
  std::ostringstream suffix;
  suffix << ".tmp." << std::this_thread::get_id();
  const auto tmp = path.string() + suffix.str();
  try {
    std::filesystem::create_directories(*options_.directory);
    nlohmann::json logprobs = nlohmann::json::array();
    for (const auto& lp : scored.logprobs) logprobs.push_back(lp ? nlohmann::json(*lp) : nlohmann::json());
    const nlohmann::json doc = {{"identity", std::string(identity)}, {"text", std::string(text)},
                                {"model", scored.model}, {"tokens", scored.tokens}, {"logprobs", logprobs}};
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      out << doc.dump();
      if (!out) throw std::runtime_error("write failed");
    }
    std::filesystem::rename(tmp, path);
  } catch (const std::exception& e) {
    std::error_code ignored;
    std::filesystem::remove(tmp, ignored);
    spdlog::warn("score cache write to {} failed: {}", path.string(), e.what());
  }
}

}  // namespace narrametric
