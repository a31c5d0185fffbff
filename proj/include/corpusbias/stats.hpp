#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "corpusbias/corpus.hpp"

namespace corpusbias {

// Log10 half-decade binning of word frequencies or frequency ranks.
//
// edges are ascending log10 values. Consecutive edges bound edges.size()-1
// closed-on-the-right bins, the first also closed on the left, and one
// final open-ended bin sits above edges.back():
//   bin 0:   [10^e0, 10^e1]
//   bin k:   (10^ek, 10^ek+1]
//   bin E-1: (10^e_last, inf)
struct BinScheme {
  enum class Kind { log10_frequency, log10_rank };

  Kind kind = Kind::log10_frequency;
  std::vector<double> edges;

  // [10^2, 10^2.5], ..., (10^5.5, 10^6], (10^6, inf): matches a min-count
  // of 100 at the low end.
  static BinScheme default_frequency();
  // Rank bins [1, 10^0.5], ..., (10^4.5, 10^5], (10^5, inf).
  static BinScheme default_rank();

  std::size_t bin_count() const { return edges.size(); }
  // Raw-space bounds; hi is +inf for the last bin.
  std::pair<double, double> bounds(std::size_t bin) const;
  // Throws DataError when value < 10^edges.front().
  std::size_t assign(double value) const;

  void validate() const;  // ascending, >= 2 edges
};

std::vector<std::size_t> assign_bins(std::span<const double> values,
                                     const BinScheme& scheme);

// mean / sample SD (n-1 denominator). nullopt when the SD is zero; throws
// DataError when n < 2.
std::optional<double> cohens_d(std::span<const double> values);

struct BinStats {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t n_words = 0;
  double mean = 0.0;                    // NaN when n == 0
  std::optional<double> sample_sd;      // present when n >= 2
  std::optional<double> effect_size;    // present when sample_sd > 0
  std::array<double, 5> quantiles{};    // 5/25/50/75/95%, NaN when n == 0
};

struct BinReport {
  BinScheme scheme;
  std::vector<BinStats> bins;
  std::size_t total_words = 0;  // == sum of n_words over bins
};

// Quantiles use linear interpolation between order statistics (the common
// "type 7" rule). Throws DataError on empty input.
BinReport bin_stats(std::span<const double> bias,
                    std::span<const std::size_t> bins,
                    const BinScheme& scheme);

// Dense 1-based ranks by descending frequency; ties broken by id order.
std::vector<std::uint64_t> frequency_ranks(const Vocabulary& vocab);

}  // namespace corpusbias
