#include "corpusbias/cooccurrence.hpp"

#include <random>

#include "corpusbias/error.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace corpusbias;

namespace {
CoocCounts count_one(const Sentence& s, int window, Weighting w) {
  return count_cooccurrences({s}, 8, window, w);
}
}  // namespace

TEST_CASE("flat counts for [a,b,c] with a wide window") {
  const auto c = count_one({0, 1, 2}, 10, Weighting::flat);
  CHECK(c.pair_count(0, 1) == 1.0);
  CHECK(c.pair_count(1, 0) == 1.0);
  CHECK(c.pair_count(0, 2) == 1.0);
  CHECK(c.pair_count(2, 0) == 1.0);
  CHECK(c.pair_count(1, 2) == 1.0);
  CHECK(c.pair_count(2, 1) == 1.0);
  CHECK(c.grand_total() == 6.0);
}

TEST_CASE("window cutoff") {
  const auto c = count_one({0, 1, 2}, 1, Weighting::flat);
  CHECK(c.pair_count(0, 2) == 0.0);
  CHECK(c.grand_total() == 4.0);
}

TEST_CASE("harmonic weighting uses 1/distance") {
  const auto c = count_one({0, 1, 2}, 10, Weighting::harmonic);
  CHECK(c.pair_count(0, 2) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(c.pair_count(0, 1) == 1.0);
}

TEST_CASE("repeated tokens accumulate the diagonal both ways") {
  const auto c = count_one({3, 3}, 5, Weighting::flat);
  CHECK(c.pair_count(3, 3) == 2.0);  // ordered pairs (0,1) and (1,0)
  CHECK(c.target_total(3) == 2.0);
  CHECK(c.grand_total() == 2.0);
}

TEST_CASE("group_count and group_total on the [a,b,c] example") {
  const auto c = count_one({0, 1, 2}, 10, Weighting::flat);
  const std::vector<WordId> bc{1, 2};
  const std::vector<WordId> b{1};
  CHECK(c.group_count(0, bc) == 2.0);
  CHECK(c.group_count(0, b) == 1.0);
  CHECK(c.group_count(0, std::vector<WordId>{7}) == 0.0);
  CHECK(c.group_total(b) == 2.0);
  const std::vector<WordId> everything{0, 1, 2, 3, 4, 5, 6, 7};
  CHECK(c.group_total(everything) == c.grand_total());
  const CoocCounts empty(8, 10, Weighting::flat);
  CHECK(empty.group_total(bc) == 0.0);
}

TEST_CASE("self-pairs contribute to group_count when x is in the group") {
  const auto c = count_one({4, 4, 1}, 5, Weighting::flat);
  const std::vector<WordId> group{4, 1};
  // pairs: (4,4) twice, (4,1) twice each direction
  CHECK(c.pair_count(4, 4) == 2.0);
  CHECK(c.group_count(4, group) == 4.0);
}

TEST_CASE("flat total for one sentence is L*(L-1) with a full window") {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t len = 1 + gen() % 12;
    Sentence s(len);
    for (auto& t : s) t = gen() % 6;
    const auto c = count_cooccurrences({s}, 6, 12, Weighting::flat);
    CHECK(c.grand_total() == double(len * (len - 1)));
  }
}

TEST_CASE("brute-force equivalence on random corpora") {
  std::mt19937_64 gen(12);
  for (int trial = 0; trial < 200; ++trial) {
    const int window = 1 + static_cast<int>(gen() % 4);
    const bool harmonic = (gen() % 2) == 0;
    const auto corpus = testsupport::random_id_corpus(gen, 6, 12, 6);
    const auto counts = count_cooccurrences(
        corpus, 6, window, harmonic ? Weighting::harmonic : Weighting::flat);
    const auto oracle = testsupport::brute_count(corpus, window, harmonic);
    for (WordId x = 0; x < 6; ++x) {
      for (WordId y = 0; y < 6; ++y) {
        CHECK(counts.pair_count(x, y) ==
              doctest::Approx(testsupport::brute_pair(oracle, x, y))
                  .epsilon(1e-12));
      }
      const auto it = oracle.totals.find(x);
      CHECK(counts.target_total(x) ==
            doctest::Approx(it == oracle.totals.end() ? 0.0 : it->second)
                .epsilon(1e-12));
    }
    CHECK(counts.grand_total() ==
          doctest::Approx(oracle.grand).epsilon(1e-12));
  }
}

TEST_CASE("marginal consistency: totals match pair sums") {
  std::mt19937_64 gen(13);
  const auto corpus = testsupport::random_id_corpus(gen, 30, 10, 5);
  const auto c = count_cooccurrences(corpus, 5, 3, Weighting::flat);
  double grand = 0.0;
  for (WordId x = 0; x < 5; ++x) {
    double row = 0.0;
    for (WordId y = 0; y < 5; ++y) row += c.pair_count(x, y);
    CHECK(c.target_total(x) == doctest::Approx(row).epsilon(1e-12));
    grand += row;
  }
  CHECK(c.grand_total() == doctest::Approx(grand).epsilon(1e-12));
}

TEST_CASE("shard merge equals counting the unsplit stream") {
  std::mt19937_64 gen(14);
  const auto corpus = testsupport::random_id_corpus(gen, 40, 10, 6);
  const auto whole = count_cooccurrences(corpus, 6, 4, Weighting::harmonic);

  const std::size_t cut = corpus.size() / 3;
  CoocCounts left(6, 4, Weighting::harmonic);
  CoocCounts right(6, 4, Weighting::harmonic);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    (i < cut ? left : right).add_sentence(corpus[i]);
  }
  left.merge(right);
  for (WordId x = 0; x < 6; ++x) {
    for (WordId y = 0; y < 6; ++y) {
      CHECK(left.pair_count(x, y) ==
            doctest::Approx(whole.pair_count(x, y)).epsilon(1e-12));
    }
  }
  CHECK(left.grand_total() ==
        doctest::Approx(whole.grand_total()).epsilon(1e-12));

  CoocCounts incompatible(6, 5, Weighting::harmonic);
  CHECK_THROWS_AS(left.merge(incompatible), DataError);
}

TEST_CASE("empty stream yields empty counts") {
  const auto c = count_cooccurrences({}, 4, 3, Weighting::flat);
  CHECK(c.grand_total() == 0.0);
  CHECK(c.distinct_pairs() == 0);
}

TEST_CASE("binary save/load round trip") {
  testsupport::TempDir dir("cooc");
  std::mt19937_64 gen(15);
  const auto corpus = testsupport::random_id_corpus(gen, 50, 12, 7);
  const auto counts = count_cooccurrences(corpus, 7, 5, Weighting::harmonic);
  counts.save(dir.file("c.bin"), dir.file("c.json"));
  const auto loaded = CoocCounts::load(dir.file("c.bin"), dir.file("c.json"));
  CHECK(loaded.window() == 5);
  CHECK(loaded.weighting() == Weighting::harmonic);
  CHECK(loaded.distinct_pairs() == counts.distinct_pairs());
  for (WordId x = 0; x < 7; ++x) {
    // Totals are rebuilt from the cells, so the summation order differs.
    CHECK(loaded.target_total(x) ==
          doctest::Approx(counts.target_total(x)).epsilon(1e-12));
    for (WordId y = 0; y < 7; ++y) {
      // Cells are persisted verbatim and must round-trip bit-exactly.
      CHECK(loaded.pair_count(x, y) == counts.pair_count(x, y));
    }
  }
  CHECK(loaded.grand_total() ==
        doctest::Approx(counts.grand_total()).epsilon(1e-12));
}

TEST_CASE("truncated binary counts are rejected") {
  testsupport::TempDir dir("cooc_bad");
  const auto counts = count_one({0, 1, 2}, 10, Weighting::flat);
  counts.save(dir.file("c.bin"), dir.file("c.json"));
  // Chop the last 8 bytes off.
  const auto size = std::filesystem::file_size(dir.file("c.bin"));
  std::filesystem::resize_file(dir.file("c.bin"), size - 8);
  CHECK_THROWS_AS(CoocCounts::load(dir.file("c.bin"), dir.file("c.json")),
                  ParseError);
}

TEST_CASE("accumulator growth keeps counts exact") {
  // Enough distinct pairs to force several table doublings.
  std::vector<Sentence> corpus;
  for (WordId w = 0; w + 1 < 2000; w += 2) corpus.push_back({w, w + 1});
  auto counts = count_cooccurrences(corpus, 2000, 1, Weighting::flat);
  CHECK(counts.distinct_pairs() == 1000);
  for (WordId w = 0; w + 1 < 2000; w += 2) {
    CHECK(counts.pair_count(w, w + 1) == 1.0);
  }
}
