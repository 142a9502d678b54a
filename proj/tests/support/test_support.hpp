#pragma once

#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "narrametric/lm_scoring.hpp"

namespace testing {

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(NARRAMETRIC_FIXTURES) / name;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("missing file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Text of a record in the reference corpus, looked up by method name.
inline std::string corpus_text(const std::string& method) {
  std::ifstream in(fixture("table1_corpus.jsonl"));
  std::string line;
  while (std::getline(in, line)) {
    const auto doc = nlohmann::json::parse(line);
    if (doc["method"] == method) return doc["text"].get<std::string>();
  }
  throw std::runtime_error("no record for " + method);
}

inline std::string narrative() { return corpus_text("xai_narrative"); }
inline std::string description() { return corpus_text("xai_description"); }
inline std::string gaming() { return corpus_text("gaming"); }

// A loopback port that nothing listens on: bound, read back and closed.
inline int unused_local_port() {
  const int fd = socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) throw std::runtime_error("socket failed");
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  socklen_t len = sizeof addr;
  const bool ok = bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) == 0 &&
                  getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len) == 0;
  close(fd);
  if (!ok) throw std::runtime_error("bind failed");
  return ntohs(addr.sin_port);
}

// Fresh temporary directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("narrametric-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// Wraps a provider and counts score() calls.
class CountingProvider final : public narrametric::LogprobProvider {
 public:
  explicit CountingProvider(std::shared_ptr<const narrametric::LogprobProvider> inner) : inner_(std::move(inner)) {}
  narrametric::ScoredText score(std::string_view text) const override {
    ++calls_;
    return inner_->score(text);
  }
  std::string identity() const override { return inner_->identity(); }
  int calls() const { return calls_.load(); }

 private:
  std::shared_ptr<const narrametric::LogprobProvider> inner_;
  mutable std::atomic<int> calls_{0};
};

// Deterministic pseudo-random prose made of a small vocabulary, with sentence
// terminators, abbreviations, quotes, digits and irregular whitespace.
inline std::string random_prose(std::mt19937& rng) {
  static const std::vector<std::string> pieces = {
      "the", "Model", "risk", "e.g.", "Dr.", "i.e.", "3.5", "22", "\"Quoted", "said.\"", "and", "so",
      "because", "Age", "(rent)", "-0.12", "well-known", "applicant's", "Ends.", "Why?", "Stop!", "ok...",
      "etc.", "Vs.", "x", "Credit", "'single'", "done.", "4,200", "Überall", "naïve"};
  static const std::vector<std::string> spaces = {" ", " ", " ", "  ", "\n", "\t", " \n "};
  std::uniform_int_distribution<std::size_t> piece(0, pieces.size() - 1);
  std::uniform_int_distribution<std::size_t> space(0, spaces.size() - 1);
  std::uniform_int_distribution<int> length(1, 40);
  std::string out;
  const int n = length(rng);
  for (int i = 0; i < n; ++i) {
    if (i > 0) out += spaces[space(rng)];
    out += pieces[piece(rng)];
  }
  return out;
}

}  // namespace testing
