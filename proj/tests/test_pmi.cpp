#include "corpusbias/pmi.hpp"

#include <cmath>
#include <random>

#include "corpusbias/error.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace corpusbias;

namespace {

// Builds counts whose group aggregates hit chosen values exactly:
// sentence [x y] at window 1 contributes 1 to each direction.
struct Fixture {
  std::vector<Sentence> corpus;
  void add_pairs(WordId x, WordId y, int n) {
    for (int i = 0; i < n; ++i) corpus.push_back({x, y});
  }
  CoocCounts counts(std::size_t vocab = 8) const {
    return count_cooccurrences(corpus, vocab, 1, Weighting::flat);
  }
};

ContextWordLists toy_lists(const Vocabulary& vocab) {
  auto lists = ContextWordLists::from_words({"a1", "a2"}, {"b1", "b2"});
  lists.resolve(vocab);
  return lists;
}

}  // namespace

TEST_CASE("conditional probability is (c + eps) / total") {
  // x=0 pairs with group word 1 three times; group word 1 also pairs with
  // word 2 elsewhere so the group total is 10.
  Fixture f;
  f.add_pairs(0, 1, 3);
  f.add_pairs(2, 1, 7);
  const auto c = f.counts();
  const std::vector<WordId> group{1};
  CHECK(c.group_count(0, group) == 3.0);
  CHECK(c.group_total(group) == 10.0);
  CHECK(conditional_prob(c, 0, group, 0.0) == doctest::Approx(0.3));
  // Zero co-occurrence with smoothing.
  CHECK(conditional_prob(c, 3, group, 0.01) ==
        doctest::Approx(0.001).epsilon(1e-12));
  // Zero group total names the group.
  CHECK_THROWS_WITH_AS(conditional_prob(c, 0, std::vector<WordId>{7}, 0.01,
                                        "group_b"),
                       doctest::Contains("group_b"), DataError);
}

TEST_CASE("pmi matches the direct formula") {
  // Want: c(x,Y)=3, target_total(x)=6, group_total(Y)=10, grand=60.
  Fixture f;
  f.add_pairs(0, 1, 3);    // c(x,Y)=3
  f.add_pairs(0, 2, 3);    // pad target_total(x) to 6
  f.add_pairs(3, 1, 7);    // pad group total to 10
  f.add_pairs(4, 5, 17);   // pad grand total to 60
  const auto c = f.counts();
  const std::vector<WordId> group{1};
  REQUIRE(c.group_count(0, group) == 3.0);
  REQUIRE(c.target_total(0) == 6.0);
  REQUIRE(c.group_total(group) == 10.0);
  REQUIRE(c.grand_total() == 60.0);

  PmiConfig cfg;
  cfg.epsilon = 0.0;
  CHECK(pmi(c, 0, group, cfg) == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  cfg.epsilon = 0.01;
  CHECK(pmi(c, 0, group, cfg) ==
        doctest::Approx(std::log(3.01 * 60.0 / 60.0)).epsilon(1e-12));
  cfg.epsilon = 0.0;
  CHECK_THROWS_AS(pmi(c, 6, group, cfg), DataError);  // zero marginal for x
}

TEST_CASE("pmi is zero when counts are proportional to marginals") {
  // One [0,0], four [1,1] and four [0,1] sentences give
  // c(0,1) = 4, tt0 = 6, tt1 = 12, grand = 18, and
  // 4/18 == (6/18) * (12/18) exactly.
  std::vector<Sentence> corpus;
  corpus.push_back({0, 0});
  for (int i = 0; i < 4; ++i) corpus.push_back({1, 1});
  for (int i = 0; i < 4; ++i) corpus.push_back({0, 1});
  const auto c = count_cooccurrences(corpus, 2, 1, Weighting::flat);
  const double grand = c.grand_total();
  REQUIRE(c.pair_count(0, 1) / grand ==
          doctest::Approx((c.target_total(0) / grand) *
                          (c.target_total(1) / grand))
              .epsilon(1e-15));
  PmiConfig cfg;
  cfg.epsilon = 0.0;
  CHECK(std::abs(pmi(c, 0, std::vector<WordId>{1}, cfg)) < 1e-12);
}

TEST_CASE("bias_pmi on hand-built counts") {
  // ids: 0=x, 1=a1, 2=a2, 3=b1, 4=b2, 5=filler.
  // Target: c(x,A)=3, tot(A)=10, c(x,B)=1, tot(B)=10.
  Fixture f;
  f.add_pairs(0, 1, 3);  // x with a1
  f.add_pairs(5, 1, 2);  // tot(a1) -> 5
  f.add_pairs(5, 2, 5);  // tot(a2) -> 5
  f.add_pairs(0, 3, 1);  // x with b1
  f.add_pairs(5, 3, 4);  // tot(b1) -> 5
  f.add_pairs(5, 4, 5);  // tot(b2) -> 5
  auto c = f.counts(6);
  const std::vector<WordId> A{1, 2}, B{3, 4};
  REQUIRE(c.group_count(0, A) == 3.0);
  REQUIRE(c.group_total(A) == 10.0);
  REQUIRE(c.group_count(0, B) == 1.0);
  REQUIRE(c.group_total(B) == 10.0);

  // Build resolved lists over a matching vocabulary layout.
  const auto vocab = build_vocabulary(
      {{"x", "x", "x", "x", "x", "x", "a1", "a1", "a1", "a1", "a1", "a2",
        "a2", "a2", "a2", "b1", "b1", "b1", "b2", "b2", "filler"}},
      1);
  REQUIRE(vocab.word(0) == "x");  // layout sanity
  auto lists = toy_lists(vocab);

  PmiConfig cfg;
  cfg.epsilon = 0.0;
  CHECK(bias_pmi(c, 0, lists, cfg) ==
        doctest::Approx(std::log(3.0)).epsilon(1e-12));  // log(0.3/0.1)

  // Symmetric counts give zero bias.
  Fixture sym;
  sym.add_pairs(0, 1, 2);
  sym.add_pairs(0, 3, 2);
  auto cs = sym.counts(6);
  CHECK(bias_pmi(cs, 0, lists, cfg) == 0.0);

  // Smoothing rescues a zero co-occurrence with B.
  Fixture zb;
  zb.add_pairs(0, 1, 3);
  zb.add_pairs(5, 1, 2);
  zb.add_pairs(5, 2, 5);
  zb.add_pairs(5, 3, 6);
  zb.add_pairs(5, 4, 4);
  auto cz = zb.counts(6);
  REQUIRE(cz.group_count(0, B) == 0.0);
  REQUIRE(cz.group_total(A) == 10.0);
  REQUIRE(cz.group_total(B) == 10.0);
  cfg.epsilon = 0.01;
  CHECK(bias_pmi(cz, 0, lists, cfg) ==
        doctest::Approx(std::log(3.01 / 0.01)).epsilon(1e-10));
  cfg.epsilon = 0.0;
  CHECK_THROWS_AS(bias_pmi(cz, 0, lists, cfg), DataError);
}

TEST_CASE("log base only rescales") {
  Fixture f;
  f.add_pairs(0, 1, 3);
  f.add_pairs(0, 3, 1);
  const auto c = f.counts(6);
  const auto vocab = build_vocabulary(
      {{"x", "x", "x", "x", "a1", "a1", "a1", "a2", "b1", "b2"}}, 1);
  auto lists = toy_lists(vocab);
  PmiConfig nat, b2, b10;
  nat.log_base = LogBase::natural;
  b2.log_base = LogBase::base2;
  b10.log_base = LogBase::base10;
  const double vn = bias_pmi(c, 0, lists, nat);
  CHECK(bias_pmi(c, 0, lists, b2) ==
        doctest::Approx(vn / std::log(2.0)).epsilon(1e-12));
  CHECK(bias_pmi(c, 0, lists, b10) ==
        doctest::Approx(vn / std::log(10.0)).epsilon(1e-12));
}

TEST_CASE("Eq. 2 identity: pmi difference equals the conditional ratio") {
  std::mt19937_64 gen(21);
  int checked = 0;
  PmiConfig cfg;
  cfg.epsilon = 0.0;
  while (checked < 200) {
    const auto corpus = testsupport::random_id_corpus(gen, 40, 8, 6);
    const auto c = count_cooccurrences(corpus, 6, 3, Weighting::flat);
    const std::vector<WordId> A{0, 1}, B{2, 3};
    for (WordId x = 4; x < 6; ++x) {
      if (c.group_count(x, A) <= 0.0 || c.group_count(x, B) <= 0.0 ||
          c.target_total(x) <= 0.0 || c.group_total(A) <= 0.0 ||
          c.group_total(B) <= 0.0) {
        continue;
      }
      const double lhs = pmi(c, x, A, cfg) - pmi(c, x, B, cfg);
      const double pa = c.group_count(x, A) / c.group_total(A);
      const double pb = c.group_count(x, B) / c.group_total(B);
      CHECK(lhs == doctest::Approx(std::log(pa / pb)).epsilon(1e-10));
      ++checked;
    }
  }
}

TEST_CASE("antisymmetry: swapping groups negates bias exactly") {
  std::mt19937_64 gen(22);
  const auto vocab = build_vocabulary(
      {{"a1", "a2", "b1", "b2", "w0", "w1", "w2", "w3"}}, 1);
  auto lists = ContextWordLists::from_words({"a1", "a2"}, {"b1", "b2"});
  lists.resolve(vocab);
  auto swapped = ContextWordLists::from_words({"b1", "b2"}, {"a1", "a2"});
  swapped.resolve(vocab);
  PmiConfig cfg;  // default epsilon 0.01
  int checked = 0;
  while (checked < 300) {
    const auto corpus = testsupport::random_id_corpus(gen, 30, 8, 8);
    const auto c = count_cooccurrences(corpus, 8, 3, Weighting::flat);
    if (c.group_total(lists.ids_a) <= 0.0 ||
        c.group_total(lists.ids_b) <= 0.0) {
      continue;
    }
    for (WordId x = 4; x < 8; ++x) {
      const double fwd = bias_pmi(c, x, lists, cfg);
      const double rev = bias_pmi(c, x, swapped, cfg);
      CHECK(fwd == -rev);  // bitwise
      ++checked;
    }
  }
}

TEST_CASE("monotonicity in the group-A co-occurrence count") {
  const auto vocab = build_vocabulary(
      {{"x", "x", "a1", "a2", "b1", "b2", "pad"}}, 1);
  auto lists = ContextWordLists::from_words({"a1", "a2"}, {"b1", "b2"});
  // ids by frequency: x=0 (freq 2), then a1,a2,b1,b2,pad alphabetical.
  lists.resolve(vocab);
  PmiConfig cfg;
  cfg.epsilon = 0.01;
  double prev = -1e300;
  for (int k = 1; k <= 6; ++k) {
    Fixture f;
    f.add_pairs(0, *vocab.find("a1"), k);
    f.add_pairs(0, *vocab.find("b1"), 2);
    f.add_pairs(6, *vocab.find("a1"), 7 - k);  // dummy id keeps tot(A) fixed
    const auto c = f.counts(7);
    REQUIRE(c.group_total(lists.ids_a) == 7.0);
    const double bias = bias_pmi(c, 0, lists, cfg);
    CHECK(bias > prev);
    prev = bias;
  }
}

TEST_CASE("with smoothing every vocabulary word gets a finite bias") {
  std::mt19937_64 gen(23);
  const auto vocab = build_vocabulary(
      {{"a1", "a2", "b1", "b2", "w0", "w1", "w2", "w3"}}, 1);
  auto lists = ContextWordLists::from_words({"a1", "a2"}, {"b1", "b2"});
  lists.resolve(vocab);
  PmiConfig cfg;  // epsilon 0.01
  int built = 0;
  while (built < 50) {
    auto corpus = testsupport::random_id_corpus(gen, 25, 8, 8);
    // Make sure both groups appear at all.
    corpus.push_back({0, 4});
    corpus.push_back({2, 5});
    const auto c = count_cooccurrences(corpus, 8, 3, Weighting::flat);
    const auto table = bias_table_pmi(c, vocab, lists, cfg, false);
    CHECK(table.skipped.empty());
    CHECK(table.entries.size() == 4);  // context words excluded
    for (const auto& e : table.entries) CHECK(std::isfinite(e.bias));
    ++built;
  }
}

TEST_CASE("full pipeline matches the brute-force oracle") {
  std::mt19937_64 gen(24);
  const auto vocab = build_vocabulary(
      {{"a1", "a2", "b1", "b2", "w0", "w1", "w2", "w3", "w4", "w5"}}, 1);
  auto lists = ContextWordLists::from_words({"a1", "a2"}, {"b1", "b2"});
  lists.resolve(vocab);
  const std::vector<std::uint32_t> A{lists.ids_a.begin(), lists.ids_a.end()};
  const std::vector<std::uint32_t> B{lists.ids_b.begin(), lists.ids_b.end()};
  PmiConfig cfg;
  cfg.epsilon = 0.01;
  for (int trial = 0; trial < 100; ++trial) {
    const int window = 1 + static_cast<int>(gen() % 3);
    const auto corpus = testsupport::random_id_corpus(gen, 50, 8, 10);
    const auto c = count_cooccurrences(corpus, 10, window, Weighting::flat);
    const auto oracle = testsupport::brute_count(corpus, window, false);
    if (testsupport::brute_group_total(oracle, A) <= 0.0 ||
        testsupport::brute_group_total(oracle, B) <= 0.0) {
      continue;
    }
    for (WordId x = 4; x < 10; ++x) {
      const double expected =
          testsupport::brute_bias_pmi(oracle, x, A, B, cfg.epsilon);
      CHECK(bias_pmi(c, x, lists, cfg) ==
            doctest::Approx(expected).epsilon(1e-12));
    }
  }
}
