#pragma once

#include <cstdint>
#include <vector>

#include "corpusbias/bias_table.hpp"
#include "corpusbias/cooccurrence.hpp"
#include "corpusbias/corpus.hpp"
#include "corpusbias/glove.hpp"
#include "corpusbias/pmi.hpp"
#include "corpusbias/rng.hpp"
#include "corpusbias/sgns.hpp"

namespace corpusbias {

struct ShufflePlan {
  std::vector<std::uint64_t> seeds;

  // seeds base, base+1, ..., base+n-1.
  static ShufflePlan consecutive(std::uint64_t base, std::size_t n);
  void validate() const;  // non-empty, distinct
};

// Global token shuffle: Fisher-Yates over the concatenated token sequence
// (seeded mt19937_64), re-split into the original sentence-length profile.
// The per-token multiset is preserved exactly.
void shuffle_corpus(std::vector<Sentence>& corpus, std::uint64_t seed);
std::vector<Sentence> shuffled_copy(const std::vector<Sentence>& corpus,
                                    std::uint64_t seed);

// Same permutation scheme over raw token strings, for file-level shuffling
// of a preprocessed corpus.
void shuffle_token_corpus(std::vector<TokenSentence>& corpus,
                          std::uint64_t seed);

enum class BiasMetric { pmi, sgns, glove };

std::string to_string(BiasMetric m);
BiasMetric bias_metric_from_string(std::string_view s);

struct ShuffledBiasConfig {
  BiasMetric metric = BiasMetric::pmi;
  int window = 10;                         // co-occurrence window (pmi/glove)
  Weighting pmi_weighting = Weighting::flat;
  Weighting glove_weighting = Weighting::harmonic;
  PmiConfig pmi;
  SgnsConfig sgns;
  GloveConfig glove;
  bool include_context_words = false;
  // Independent seed runs execute as parallel jobs; each job holds its own
  // corpus copy and counts, so memory scales with jobs.
  int jobs = 1;
};

// One full pipeline run per seed (shuffle -> count/train -> bias), then the
// per-word arithmetic mean across seeds. Words that fail in any run are
// dropped and listed in skipped. A hard error in any run aborts with the
// seed identified. When per_seed is non-null it receives one table per
// seed, in plan order.
BiasTable averaged_shuffled_bias(const std::vector<Sentence>& corpus,
                                 const Vocabulary& vocab,
                                 const ContextWordLists& lists,
                                 const ShufflePlan& plan,
                                 const ShuffledBiasConfig& config,
                                 std::vector<BiasTable>* per_seed = nullptr);

// Mean across already-computed per-seed tables (the averaging step alone).
BiasTable average_bias_tables(const std::vector<BiasTable>& tables);

}  // namespace corpusbias
