#include "corpusbias/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "corpusbias/error.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace corpusbias;

TEST_CASE("default frequency scheme matches the half-decade layout") {
  const auto s = BinScheme::default_frequency();
  REQUIRE(s.edges.size() == 9);  // 2.0 .. 6.0
  CHECK(s.bin_count() == 9);     // 8 closed + open top
  CHECK(s.edges.front() == 2.0);
  CHECK(s.edges.back() == 6.0);
}

TEST_CASE("bin assignment boundary conventions") {
  const auto s = BinScheme::default_frequency();
  CHECK(s.assign(100.0) == 0);        // first bin closed on both ends
  CHECK(s.assign(316.0) == 0);
  CHECK(s.assign(1000.0) == 1);       // upper edge inclusive
  CHECK(s.assign(1000.5) == 2);
  CHECK(s.assign(1e7) == 8);          // open-ended top bin
  CHECK_THROWS_AS(s.assign(99.0), DataError);
}

TEST_CASE("bin bounds are raw-space with an infinite top") {
  const auto s = BinScheme::default_frequency();
  const auto [lo0, hi0] = s.bounds(0);
  CHECK(lo0 == doctest::Approx(100.0));
  CHECK(hi0 == doctest::Approx(std::pow(10.0, 2.5)));
  const auto [lo8, hi8] = s.bounds(8);
  CHECK(lo8 == doctest::Approx(1e6));
  CHECK(std::isinf(hi8));
}

TEST_CASE("scheme validation") {
  BinScheme s;
  s.edges = {2.0};
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s.edges = {2.0, 2.0};
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s.edges = {2.0, 2.5};
  CHECK_NOTHROW(s.validate());
}

TEST_CASE("cohens_d basics") {
  CHECK(*cohens_d(std::vector<double>{0.0, 2.0}) ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(*cohens_d(std::vector<double>{-1.0, 1.0}) == 0.0);
  CHECK_FALSE(cohens_d(std::vector<double>{3.0, 3.0, 3.0}).has_value());
  CHECK_THROWS_AS(cohens_d(std::vector<double>{1.0}), DataError);
}

TEST_CASE("cohens_d scaling and sign properties") {
  std::mt19937_64 gen(31);
  std::uniform_real_distribution<double> val(-3.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> x(2 + gen() % 20);
    for (auto& v : x) v = val(gen);
    const auto d = cohens_d(x);
    if (!d) continue;
    const double c = 0.1 + 5.0 * std::uniform_real_distribution<double>(
                                     0.0, 1.0)(gen);
    std::vector<double> scaled = x, negated = x;
    for (auto& v : scaled) v *= c;
    for (auto& v : negated) v = -v;
    CHECK(*cohens_d(scaled) == doctest::Approx(*d).epsilon(1e-12));
    CHECK(*cohens_d(negated) == doctest::Approx(-*d).epsilon(1e-12));
  }
}

TEST_CASE("bin_stats on a single occupied bin") {
  BinScheme s;
  s.edges = {0.0, 4.0};
  const std::vector<double> bias{0.0, 2.0};
  const std::vector<std::size_t> bins{0, 0};
  const auto report = bin_stats(bias, bins, s);
  REQUIRE(report.bins.size() == 2);
  const auto& b = report.bins[0];
  CHECK(b.n_words == 2);
  CHECK(b.mean == doctest::Approx(1.0));
  CHECK(*b.sample_sd == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(*b.effect_size ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(report.bins[1].n_words == 0);
  CHECK_FALSE(report.bins[1].sample_sd.has_value());
}

TEST_CASE("all-zero biases: means zero, effect sizes undefined") {
  BinScheme s;
  s.edges = {0.0, 1.0, 2.0};
  const std::vector<double> bias{0.0, 0.0, 0.0, 0.0};
  const std::vector<std::size_t> bins{0, 0, 1, 1};
  const auto report = bin_stats(bias, bins, s);
  for (std::size_t k = 0; k < 2; ++k) {
    CHECK(report.bins[k].mean == 0.0);
    CHECK(*report.bins[k].sample_sd == 0.0);
    CHECK_FALSE(report.bins[k].effect_size.has_value());
  }
}

TEST_CASE("report word counts partition the scored set") {
  std::mt19937_64 gen(32);
  const auto scheme = BinScheme::default_frequency();
  std::uniform_real_distribution<double> freq(100.0, 1e7);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  std::vector<double> axis(500), bias(500);
  for (std::size_t i = 0; i < axis.size(); ++i) {
    axis[i] = freq(gen);
    bias[i] = val(gen);
  }
  const auto bins = assign_bins(axis, scheme);
  const auto report = bin_stats(bias, bins, scheme);
  std::size_t total = 0;
  for (const auto& b : report.bins) total += b.n_words;
  CHECK(total == 500);
  CHECK(report.total_words == 500);
}

TEST_CASE("bin_stats matches a naive per-bin recomputation") {
  std::mt19937_64 gen(33);
  std::uniform_real_distribution<double> val(-2.0, 2.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  BinScheme scheme;
  scheme.edges = {0.0, 1.0, 2.0, 3.0};
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + gen() % 60;
    std::vector<double> bias(n), axis(n);
    for (std::size_t i = 0; i < n; ++i) {
      bias[i] = val(gen);
      axis[i] = std::pow(10.0, 3.2 * unit(gen));
    }
    const auto bins = assign_bins(axis, scheme);
    const auto report = bin_stats(bias, bins, scheme);

    std::map<std::size_t, std::vector<double>> grouped;
    for (std::size_t i = 0; i < n; ++i) grouped[bins[i]].push_back(bias[i]);
    for (std::size_t k = 0; k < report.bins.size(); ++k) {
      const auto& b = report.bins[k];
      auto values = grouped.count(k) ? grouped[k] : std::vector<double>{};
      REQUIRE(b.n_words == values.size());
      if (values.empty()) continue;
      double mean = 0.0;
      for (double v : values) mean += v;
      mean /= static_cast<double>(values.size());
      CHECK(b.mean == doctest::Approx(mean).epsilon(1e-12));
      if (values.size() >= 2) {
        double ss = 0.0;
        for (double v : values) ss += (v - mean) * (v - mean);
        const double sd =
            std::sqrt(ss / static_cast<double>(values.size() - 1));
        CHECK(*b.sample_sd == doctest::Approx(sd).epsilon(1e-12));
        if (sd > 0.0) {
          CHECK(*b.effect_size == doctest::Approx(mean / sd).epsilon(1e-12));
        }
      }
      std::sort(values.begin(), values.end());
      const std::array<double, 5> probs{0.05, 0.25, 0.50, 0.75, 0.95};
      for (std::size_t q = 0; q < probs.size(); ++q) {
        double expected;
        if (values.size() == 1) {
          expected = values[0];
        } else {
          const double h = probs[q] * static_cast<double>(values.size() - 1);
          const auto lo = static_cast<std::size_t>(h);
          const auto hi = std::min(lo + 1, values.size() - 1);
          expected = values[lo] + (h - static_cast<double>(lo)) *
                                      (values[hi] - values[lo]);
        }
        CHECK(b.quantiles[q] == doctest::Approx(expected).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("bin counts match an independent histogram") {
  std::mt19937_64 gen(34);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto scheme = BinScheme::default_frequency();
  std::vector<double> axis(2000);
  for (auto& v : axis) v = std::pow(10.0, 2.0 + 5.0 * unit(gen));
  const auto bins = assign_bins(axis, scheme);
  std::vector<std::size_t> histogram(scheme.bin_count(), 0);
  for (double v : axis) {
    std::size_t k = scheme.bin_count() - 1;
    for (std::size_t e = 0; e + 1 < scheme.edges.size(); ++e) {
      if (v <= std::pow(10.0, scheme.edges[e + 1])) {
        k = e;
        break;
      }
    }
    ++histogram[k];
  }
  std::vector<std::size_t> counted(scheme.bin_count(), 0);
  for (auto b : bins) ++counted[b];
  CHECK(counted == histogram);
}

TEST_CASE("frequency ranks: dense, 1-based, ties by id") {
  const auto vocab =
      build_vocabulary({{"a", "a", "a", "a", "a", "b", "b", "b", "c"}}, 1);
  const auto ranks = frequency_ranks(vocab);
  CHECK(ranks[*vocab.find("a")] == 1);
  CHECK(ranks[*vocab.find("b")] == 2);
  CHECK(ranks[*vocab.find("c")] == 3);

  const auto tied = build_vocabulary({{"x", "y", "z"}}, 1);
  const auto tied_ranks = frequency_ranks(tied);
  // All frequencies equal: ranks follow id order.
  for (WordId id = 0; id < tied.size(); ++id) {
    CHECK(tied_ranks[id] == id + 1);
  }
}
