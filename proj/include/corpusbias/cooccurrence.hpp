#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "corpusbias/corpus.hpp"

namespace corpusbias {

enum class Weighting { flat, harmonic };

std::string to_string(Weighting w);
Weighting weighting_from_string(std::string_view s);

namespace detail {

// Insert-only open-addressing accumulator keyed by packed id pairs.
// Linear probing, power-of-two capacity, grown at 50% load. A node-based
// map would roughly triple memory and time at the 10^7-pair scale the
// shuffle experiments reach.
class PairAccumulator {
 public:
  PairAccumulator();

  void add(std::uint64_t key, double w);
  double get(std::uint64_t key) const;  // 0 when absent
  std::size_t size() const { return size_; }

  template <class F>
  void for_each(F&& f) const {  // unordered
    for (std::size_t i = 0; i < keys_.size(); ++i) {
      if (keys_[i] != kEmpty) f(keys_[i], vals_[i]);
    }
  }

  static constexpr std::uint64_t kEmpty = ~0ull;

 private:
  std::size_t slot(std::uint64_t key) const;
  void grow();

  std::vector<std::uint64_t> keys_;
  std::vector<double> vals_;
  std::size_t size_ = 0;
  std::size_t mask_ = 0;
};

}  // namespace detail

// Sparse symmetric windowed co-occurrence counts with marginals.
//
// Storage is one cell per unordered pair: for x != y the cell holds the
// (equal) directed counts count(x,y) == count(y,x); the diagonal cell holds
// the full directed self count, i.e. both orientations of every repeated
// token pair. grand_total() is the sum of all directed counts, L*(L-1) per
// length-L sentence under flat weighting with a full window.
class CoocCounts {
 public:
  CoocCounts() = default;
  CoocCounts(std::size_t vocab_size, int window, Weighting weighting);

  // Counts every ordered position pair (i, j), i != j, |i - j| <= window.
  // Windows never cross sentence boundaries. Sentences must be OOV-filtered.
  void add_sentence(const Sentence& sentence);

  // Shard merge; other must have identical window/weighting/vocab size.
  void merge(const CoocCounts& other);

  double pair_count(WordId x, WordId y) const;
  double target_total(WordId x) const { return target_totals_[x]; }
  double grand_total() const { return grand_total_; }

  // sum_{y in group} count(x, y); the diagonal contributes when x is in
  // the group.
  double group_count(WordId x, std::span<const WordId> group) const;
  // sum_{y in group} target_total(y).
  double group_total(std::span<const WordId> group) const;

  std::size_t vocab_size() const { return target_totals_.size(); }
  std::size_t distinct_pairs() const { return pairs_.size(); }
  int window() const { return window_; }
  Weighting weighting() const { return weighting_; }

  // Cells as (i, j, count) with i <= j, sorted by (i, j).
  std::vector<std::tuple<WordId, WordId, double>> sorted_cells() const;

  // Binary record file (little-endian u32 i, u32 j, f64 count; i <= j,
  // sorted) plus a JSON sidecar carrying window, weighting, grand_total
  // and vocab_size.
  void save(const std::filesystem::path& bin_path,
            const std::filesystem::path& sidecar_path) const;
  static CoocCounts load(const std::filesystem::path& bin_path,
                         const std::filesystem::path& sidecar_path);

  // Debug text form: `i j count` lines, same order as save().
  void write_text(std::ostream& out) const;

 private:
  static std::uint64_t pack(WordId a, WordId b);

  detail::PairAccumulator pairs_;
  std::vector<double> target_totals_;
  double grand_total_ = 0.0;
  int window_ = 10;
  Weighting weighting_ = Weighting::flat;
};

CoocCounts count_cooccurrences(const std::vector<Sentence>& corpus,
                               std::size_t vocab_size, int window,
                               Weighting weighting);

}  // namespace corpusbias
