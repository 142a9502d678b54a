#pragma once

#include <atomic>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>

#include "narrametric/lm_scoring.hpp"

namespace narrametric {

struct CacheOptions {
  bool enabled = true;
  // When set, responses are also persisted as <directory>/<key>.json.
  std::optional<std::filesystem::path> directory;
};

// Memoizing wrapper keyed by SHA-256 of provider identity and exact text bytes.
// Disk problems are logged and treated as cache misses; they never fail a score.
class CachedProvider final : public LogprobProvider {
 public:
  CachedProvider(std::shared_ptr<const LogprobProvider> inner, CacheOptions options);

  ScoredText score(std::string_view text) const override;
  std::string identity() const override { return inner_->identity(); }

  std::size_t hits() const { return hits_.load(); }
  std::size_t misses() const { return misses_.load(); }

  static std::string cache_key(std::string_view identity, std::string_view text);

 private:
  std::optional<ScoredText> read_disk(const std::string& key, std::string_view identity,
                                      std::string_view text) const;
  void write_disk(const std::string& key, std::string_view identity, std::string_view text,
                  const ScoredText& scored) const;

  std::shared_ptr<const LogprobProvider> inner_;
  CacheOptions options_;
  mutable std::mutex mutex_;
  mutable std::unordered_map<std::string, ScoredText> memory_;
  mutable std::atomic<std::size_t> hits_{0};
  mutable std::atomic<std::size_t> misses_{0};
};

}  // namespace narrametric
