#include "corpusbias/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "corpusbias/error.hpp"

namespace corpusbias {

namespace {
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::array<double, 5> kQuantileProbs{0.05, 0.25, 0.50, 0.75, 0.95};

double quantile_type7(const std::vector<double>& sorted, double p) {
  const std::size_t n = sorted.size();
  if (n == 1) return sorted[0];
  const double h = p * static_cast<double>(n - 1);
  const auto lo = static_cast<std::size_t>(h);
  if (lo + 1 >= n) return sorted[n - 1];
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}
}  // namespace

BinScheme BinScheme::default_frequency() {
  BinScheme s;
  s.kind = Kind::log10_frequency;
  for (int i = 4; i <= 12; ++i) s.edges.push_back(0.5 * i);  // 2.0 .. 6.0
  return s;
}

BinScheme BinScheme::default_rank() {
  BinScheme s;
  s.kind = Kind::log10_rank;
  for (int i = 0; i <= 10; ++i) s.edges.push_back(0.5 * i);  // 0.0 .. 5.0
  return s;
}

void BinScheme::validate() const {
  if (edges.size() < 2) throw ConfigError("bin scheme needs >= 2 edges");
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (!(edges[i] > edges[i - 1])) {
      throw ConfigError("bin edges must be strictly ascending");
    }
  }
}

std::pair<double, double> BinScheme::bounds(std::size_t bin) const {
  const double lo = std::pow(10.0, edges[bin]);
  const double hi =
      bin + 1 < edges.size() ? std::pow(10.0, edges[bin + 1]) : kInf;
  return {lo, hi};
}

std::size_t BinScheme::assign(double value) const {
  if (value < std::pow(10.0, edges.front())) {
    throw DataError("value " + std::to_string(value) +
                    " lies below the first bin edge 10^" +
                    std::to_string(edges.front()));
  }
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    if (value <= std::pow(10.0, edges[k + 1])) return k;
  }
  return edges.size() - 1;  // open-ended top bin
}

std::vector<std::size_t> assign_bins(std::span<const double> values,
                                     const BinScheme& scheme) {
  scheme.validate();
  std::vector<std::size_t> bins;
  bins.reserve(values.size());
  for (double v : values) bins.push_back(scheme.assign(v));
  return bins;
}

std::optional<double> cohens_d(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) {
    throw DataError("Cohen's d needs at least 2 values, got " +
                    std::to_string(n));
  }
  const double mean =
      std::accumulate(values.begin(), values.end(), 0.0) /
      static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (sd == 0.0) return std::nullopt;
  return mean / sd;
}

BinReport bin_stats(std::span<const double> bias,
                    std::span<const std::size_t> bins,
                    const BinScheme& scheme) {
  scheme.validate();
  if (bias.empty()) throw DataError("bin_stats: no scored words");
  if (bias.size() != bins.size()) {
    throw DataError("bin_stats: bias and bin assignments differ in length");
  }

  std::vector<std::vector<double>> grouped(scheme.bin_count());
  for (std::size_t i = 0; i < bias.size(); ++i) {
    if (bins[i] >= grouped.size()) {
      throw DataError("bin_stats: bin index out of range");
    }
    grouped[bins[i]].push_back(bias[i]);
  }

  BinReport report;
  report.scheme = scheme;
  report.total_words = bias.size();
  report.bins.reserve(grouped.size());
  for (std::size_t k = 0; k < grouped.size(); ++k) {
    auto& values = grouped[k];
    BinStats s;
    std::tie(s.lo, s.hi) = scheme.bounds(k);
    s.n_words = values.size();
    if (values.empty()) {
      s.mean = kNan;
      s.quantiles.fill(kNan);
      report.bins.push_back(s);
      continue;
    }
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) /
             static_cast<double>(values.size());
    if (values.size() >= 2) {
      double ss = 0.0;
      for (double v : values) ss += (v - s.mean) * (v - s.mean);
      const double sd =
          std::sqrt(ss / static_cast<double>(values.size() - 1));
      s.sample_sd = sd;
      if (sd > 0.0) s.effect_size = s.mean / sd;
    }
    std::sort(values.begin(), values.end());
    for (std::size_t q = 0; q < kQuantileProbs.size(); ++q) {
      s.quantiles[q] = quantile_type7(values, kQuantileProbs[q]);
    }
    report.bins.push_back(s);
  }
  return report;
}

std::vector<std::uint64_t> frequency_ranks(const Vocabulary& vocab) {
  if (vocab.empty()) throw DataError("frequency_ranks: empty vocabulary");
  std::vector<WordId> ids(vocab.size());
  std::iota(ids.begin(), ids.end(), 0u);
  std::stable_sort(ids.begin(), ids.end(), [&](WordId a, WordId b) {
    return vocab.freq(a) > vocab.freq(b);
  });
  std::vector<std::uint64_t> ranks(vocab.size());
  for (std::size_t r = 0; r < ids.size(); ++r) ranks[ids[r]] = r + 1;
  return ranks;
}

}  // namespace corpusbias
