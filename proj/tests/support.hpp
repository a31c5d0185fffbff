#pragma once

// Helpers shared by the unit and acceptance suites: scratch directories,
// random-corpus generators, and brute-force oracles kept deliberately
// independent of the library's counting and PMI code paths.

#include <unistd.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "corpusbias/corpus.hpp"

namespace testsupport {

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("corpusbias_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter_++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path file(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
  static inline int counter_ = 0;
};

// All-ordered-pairs counting oracle, O(L^2) per sentence over a std::map.
struct BruteCounts {
  std::map<std::pair<std::uint32_t, std::uint32_t>, double> pairs;
  std::map<std::uint32_t, double> totals;
  double grand = 0.0;
};

inline BruteCounts brute_count(
    const std::vector<corpusbias::Sentence>& corpus, int window,
    bool harmonic) {
  BruteCounts c;
  for (const auto& s : corpus) {
    const auto n = static_cast<long>(s.size());
    for (long i = 0; i < n; ++i) {
      for (long j = 0; j < n; ++j) {
        if (i == j) continue;
        const long d = i > j ? i - j : j - i;
        if (d > window) continue;
        const double w = harmonic ? 1.0 / static_cast<double>(d) : 1.0;
        c.pairs[{s[i], s[j]}] += w;
        c.totals[s[i]] += w;
        c.grand += w;
      }
    }
  }
  return c;
}

inline double brute_pair(const BruteCounts& c, std::uint32_t x,
                         std::uint32_t y) {
  const auto it = c.pairs.find({x, y});
  return it == c.pairs.end() ? 0.0 : it->second;
}

inline double brute_group_count(const BruteCounts& c, std::uint32_t x,
                                const std::vector<std::uint32_t>& group) {
  double sum = 0.0;
  for (auto y : group) sum += brute_pair(c, x, y);
  return sum;
}

inline double brute_group_total(const BruteCounts& c,
                                const std::vector<std::uint32_t>& group) {
  double sum = 0.0;
  for (auto y : group) {
    const auto it = c.totals.find(y);
    if (it != c.totals.end()) sum += it->second;
  }
  return sum;
}

// Direct-formula PMI bias: log((c_A + eps)/tot_A) - log((c_B + eps)/tot_B).
inline double brute_bias_pmi(const BruteCounts& c, std::uint32_t x,
                             const std::vector<std::uint32_t>& a,
                             const std::vector<std::uint32_t>& b, double eps) {
  const double pa = (brute_group_count(c, x, a) + eps) / brute_group_total(c, a);
  const double pb = (brute_group_count(c, x, b) + eps) / brute_group_total(c, b);
  return std::log(pa) - std::log(pb);
}

inline std::vector<corpusbias::Sentence> random_id_corpus(
    std::mt19937_64& gen, std::size_t max_sentences, std::size_t max_len,
    std::uint32_t vocab_size) {
  std::uniform_int_distribution<std::size_t> n_sent(1, max_sentences);
  std::uniform_int_distribution<std::size_t> len(1, max_len);
  std::uniform_int_distribution<std::uint32_t> word(0, vocab_size - 1);
  std::vector<corpusbias::Sentence> corpus(n_sent(gen));
  for (auto& s : corpus) {
    s.resize(len(gen));
    for (auto& t : s) t = word(gen);
  }
  return corpus;
}

}  // namespace testsupport
