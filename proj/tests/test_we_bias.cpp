#include "corpusbias/we_bias.hpp"

#include <cmath>
#include <random>

#include "corpusbias/error.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace corpusbias;

namespace {

EmbeddingMatrix make_matrix(
    const std::vector<std::pair<std::string, std::vector<double>>>& rows) {
  std::vector<std::string> words;
  for (const auto& [w, v] : rows) words.push_back(w);
  EmbeddingMatrix emb(words, rows.front().second.size());
  for (WordId id = 0; id < rows.size(); ++id) {
    auto dst = emb.vec(id);
    std::copy(rows[id].second.begin(), rows[id].second.end(), dst.begin());
  }
  return emb;
}

ContextWordLists lists_ab(std::vector<std::string> a,
                          std::vector<std::string> b) {
  return ContextWordLists::from_words(std::move(a), std::move(b));
}

}  // namespace

TEST_CASE("bias_we on axis-aligned vectors") {
  const auto emb = make_matrix({{"x", {1.0, 0.0}},
                                {"a1", {1.0, 0.0}},
                                {"b1", {0.0, 1.0}}});
  CHECK(bias_we(emb, "x", lists_ab({"a1"}, {"b1"})) == doctest::Approx(1.0));
}

TEST_CASE("identical groups give zero bias") {
  const auto emb = make_matrix({{"x", {0.3, 0.7}},
                                {"a1", {1.0, 2.0}},
                                {"b1", {1.0, 2.0}}});
  CHECK(bias_we(emb, "x", lists_ab({"a1"}, {"b1"})) == 0.0);
}

TEST_CASE("mean over groups: worked example") {
  const auto emb = make_matrix({{"x", {1.0, 1.0}},
                                {"a1", {1.0, 0.0}},
                                {"a2", {0.0, 1.0}},
                                {"b1", {-1.0, 0.0}}});
  CHECK(bias_we(emb, "x", lists_ab({"a1", "a2"}, {"b1"})) ==
        doctest::Approx(1.41421).epsilon(1e-5));
}

TEST_CASE("missing context words are a hard error") {
  const auto emb = make_matrix({{"x", {1.0}}, {"a1", {1.0}}});
  CHECK_THROWS_WITH_AS(bias_we(emb, "x", lists_ab({"a1"}, {"b1"})),
                       doctest::Contains("b1"), ConfigError);
}

TEST_CASE("missing target word and zero-norm vectors are data errors") {
  const auto emb = make_matrix({{"x", {1.0, 0.0}},
                                {"z", {0.0, 0.0}},
                                {"a1", {1.0, 1.0}},
                                {"b1", {0.0, 1.0}}});
  const auto lists = lists_ab({"a1"}, {"b1"});
  CHECK_THROWS_AS(bias_we(emb, "nothere", lists), DataError);
  CHECK_THROWS_WITH_AS(bias_we(emb, "z", lists), doctest::Contains("z"),
                       DataError);
}

TEST_CASE("antisymmetry, scale invariance, bound, permutation invariance") {
  std::mt19937_64 gen(71);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::pair<std::string, std::vector<double>>> rows;
    const std::size_t dim = 2 + gen() % 5;
    auto random_vec = [&] {
      std::vector<double> v(dim);
      double norm = 0.0;
      while (norm == 0.0) {
        for (auto& x : v) x = val(gen);
        norm = 0.0;
        for (double x : v) norm += x * x;
      }
      return v;
    };
    rows.emplace_back("x", random_vec());
    for (int i = 0; i < 3; ++i) {
      rows.emplace_back("a" + std::to_string(i), random_vec());
    }
    for (int i = 0; i < 2; ++i) {
      rows.emplace_back("b" + std::to_string(i), random_vec());
    }
    const auto emb = make_matrix(rows);
    const auto fwd = lists_ab({"a0", "a1", "a2"}, {"b0", "b1"});
    const auto rev = lists_ab({"b0", "b1"}, {"a0", "a1", "a2"});
    const auto perm = lists_ab({"a2", "a0", "a1"}, {"b1", "b0"});

    const double bias = bias_we(emb, "x", fwd);
    CHECK(std::abs(bias) <= 2.0);
    CHECK(bias_we(emb, "x", rev) == doctest::Approx(-bias).epsilon(1e-12));
    CHECK(bias_we(emb, "x", perm) == doctest::Approx(bias).epsilon(1e-12));

    // Scaling any single vector by a positive constant changes nothing.
    auto scaled_rows = rows;
    const std::size_t victim = gen() % rows.size();
    for (auto& x : scaled_rows[victim].second) x *= 37.5;
    const auto scaled = make_matrix(scaled_rows);
    CHECK(bias_we(scaled, "x", fwd) == doctest::Approx(bias).epsilon(1e-10));
  }
}

TEST_CASE("bias table excludes context words by default") {
  const auto emb = make_matrix({{"a1", {1.0, 0.0}},
                                {"b1", {0.0, 1.0}},
                                {"w1", {1.0, 1.0}},
                                {"w2", {-1.0, 1.0}}});
  const auto lists = lists_ab({"a1"}, {"b1"});
  const auto table = bias_table_we(emb, lists);
  REQUIRE(table.entries.size() == 2);
  for (const auto& e : table.entries) {
    CHECK(e.word != "a1");
    CHECK(e.word != "b1");
  }
  const auto with_ctx = bias_table_we(emb, lists, nullptr, true);
  CHECK(with_ctx.entries.size() == 4);

  // Vocabulary of only context words -> empty table.
  const auto only_ctx = make_matrix({{"a1", {1.0, 0.0}}, {"b1", {0.0, 1.0}}});
  CHECK(bias_table_we(only_ctx, lists).entries.empty());
}

TEST_CASE("bias table matches independent bias_we calls") {
  const auto emb = make_matrix({{"a1", {1.0, 0.2}},
                                {"b1", {0.1, 1.0}},
                                {"u", {0.5, 0.5}},
                                {"v", {-0.5, 0.25}},
                                {"w", {0.9, -0.1}}});
  const auto lists = lists_ab({"a1"}, {"b1"});
  const auto table = bias_table_we(emb, lists);
  REQUIRE(table.entries.size() == 3);
  for (const auto& e : table.entries) {
    CHECK(e.bias == bias_we(emb, e.word, lists));
  }
}

TEST_CASE("bias table against a scalar-loop oracle") {
  std::mt19937_64 gen(72);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  std::vector<std::pair<std::string, std::vector<double>>> rows;
  rows.emplace_back("a1", std::vector<double>{1.0, 0.5, 0.0});
  rows.emplace_back("a2", std::vector<double>{0.0, 1.0, 0.5});
  rows.emplace_back("b1", std::vector<double>{-1.0, 0.5, 0.2});
  for (int i = 0; i < 20; ++i) {
    std::vector<double> v(3);
    for (auto& x : v) x = val(gen);
    if (v[0] == 0.0 && v[1] == 0.0 && v[2] == 0.0) v[0] = 0.1;
    rows.emplace_back("w" + std::to_string(i), v);
  }
  const auto emb = make_matrix(rows);
  const auto lists = lists_ab({"a1", "a2"}, {"b1"});
  const auto table = bias_table_we(emb, lists);

  auto scalar_cos = [&](const std::vector<double>& u,
                        const std::vector<double>& v) {
    double dot = 0.0, nu = 0.0, nv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      dot += u[i] * v[i];
      nu += u[i] * u[i];
      nv += v[i] * v[i];
    }
    return dot / (std::sqrt(nu) * std::sqrt(nv));
  };
  for (const auto& e : table.entries) {
    std::vector<double> x;
    for (const auto& [w, v] : rows) {
      if (w == e.word) x = v;
    }
    const double expected =
        (scalar_cos(x, rows[0].second) + scalar_cos(x, rows[1].second)) / 2.0 -
        scalar_cos(x, rows[2].second);
    CHECK(e.bias == doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("words missing from a separate vocabulary are skipped, recorded") {
  const auto emb = make_matrix({{"a1", {1.0, 0.0}},
                                {"b1", {0.0, 1.0}},
                                {"known", {1.0, 1.0}},
                                {"unknown", {0.5, 1.0}}});
  const auto vocab = build_vocabulary(
      {{"a1", "b1", "known", "known", "other"}}, 1);
  const auto lists = lists_ab({"a1"}, {"b1"});
  const auto table = bias_table_we(emb, lists, &vocab);
  REQUIRE(table.entries.size() == 1);
  CHECK(table.entries[0].word == "known");
  CHECK(table.entries[0].axis == 2.0);  // corpus frequency
  REQUIRE(table.skipped.size() == 1);
  CHECK(table.skipped[0].find("unknown") != std::string::npos);
}

TEST_CASE("without a vocabulary the axis is the 1-based file rank") {
  const auto emb = make_matrix({{"a1", {1.0, 0.0}},
                                {"b1", {0.0, 1.0}},
                                {"first", {1.0, 1.0}},
                                {"second", {0.5, 1.0}}});
  const auto table = bias_table_we(emb, lists_ab({"a1"}, {"b1"}));
  REQUIRE(table.entries.size() == 2);
  CHECK(table.entries[0].word == "first");
  CHECK(table.entries[0].axis == 3.0);  // row 3 in the file
  CHECK(table.entries[1].axis == 4.0);
}
