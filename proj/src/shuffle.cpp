#include "corpusbias/shuffle.hpp"

#include <algorithm>
#include <map>
#include <thread>
#include <unordered_set>

#include "corpusbias/error.hpp"
#include "corpusbias/we_bias.hpp"

namespace corpusbias {

ShufflePlan ShufflePlan::consecutive(std::uint64_t base, std::size_t n) {
  ShufflePlan plan;
  plan.seeds.reserve(n);
  for (std::size_t i = 0; i < n; ++i) plan.seeds.push_back(base + i);
  plan.validate();
  return plan;
}

void ShufflePlan::validate() const {
  if (seeds.empty()) throw ConfigError("shuffle plan needs >= 1 seed");
  std::unordered_set<std::uint64_t> seen(seeds.begin(), seeds.end());
  if (seen.size() != seeds.size()) {
    throw ConfigError("shuffle plan seeds must be distinct");
  }
}

namespace {

template <class Token>
void global_permute(std::vector<std::vector<Token>>& corpus,
                    std::uint64_t seed) {
  std::vector<Token> flat;
  std::size_t total = 0;
  for (const auto& s : corpus) total += s.size();
  flat.reserve(total);
  for (auto& s : corpus) {
    for (auto& t : s) flat.push_back(std::move(t));
  }
  Rng rng(seed);
  for (std::size_t i = flat.size(); i > 1; --i) {
    std::swap(flat[i - 1], flat[rng.below(i)]);
  }
  std::size_t pos = 0;
  for (auto& s : corpus) {
    for (auto& t : s) t = std::move(flat[pos++]);
  }
}

}  // namespace

void shuffle_corpus(std::vector<Sentence>& corpus, std::uint64_t seed) {
  global_permute(corpus, seed);
}

std::vector<Sentence> shuffled_copy(const std::vector<Sentence>& corpus,
                                    std::uint64_t seed) {
  std::vector<Sentence> copy = corpus;
  shuffle_corpus(copy, seed);
  return copy;
}

void shuffle_token_corpus(std::vector<TokenSentence>& corpus,
                          std::uint64_t seed) {
  global_permute(corpus, seed);
}

std::string to_string(BiasMetric m) {
  switch (m) {
    case BiasMetric::pmi:
      return "pmi";
    case BiasMetric::sgns:
      return "sgns";
    case BiasMetric::glove:
      return "glove";
  }
  return "pmi";
}

BiasMetric bias_metric_from_string(std::string_view s) {
  if (s == "pmi") return BiasMetric::pmi;
  if (s == "sgns") return BiasMetric::sgns;
  if (s == "glove") return BiasMetric::glove;
  throw ConfigError("unknown bias metric `" + std::string(s) +
                    "` (expected pmi|sgns|glove)");
}

namespace {

BiasTable single_run(const std::vector<Sentence>& shuffled,
                     const Vocabulary& vocab, const ContextWordLists& lists,
                     const ShuffledBiasConfig& cfg) {
  switch (cfg.metric) {
    case BiasMetric::pmi: {
      const CoocCounts counts = count_cooccurrences(
          shuffled, vocab.size(), cfg.window, cfg.pmi_weighting);
      return bias_table_pmi(counts, vocab, lists, cfg.pmi,
                            cfg.include_context_words);
    }
    case BiasMetric::sgns: {
      const EmbeddingMatrix emb = train_sgns(shuffled, vocab, cfg.sgns);
      return bias_table_we(emb, lists, &vocab, cfg.include_context_words);
    }
    case BiasMetric::glove: {
      const CoocCounts counts = count_cooccurrences(
          shuffled, vocab.size(), cfg.window, cfg.glove_weighting);
      const EmbeddingMatrix emb = train_glove(counts, vocab, cfg.glove);
      return bias_table_we(emb, lists, &vocab, cfg.include_context_words);
    }
  }
  throw ConfigError("unknown bias metric");
}

}  // namespace

BiasTable average_bias_tables(const std::vector<BiasTable>& tables) {
  if (tables.empty()) throw DataError("no bias tables to average");
  // word -> (axis, sum, runs seen)
  std::map<std::string, std::tuple<double, double, std::size_t>> acc;
  for (const auto& table : tables) {
    for (const auto& e : table.entries) {
      auto [it, inserted] =
          acc.try_emplace(e.word, e.axis, 0.0, std::size_t{0});
      std::get<1>(it->second) += e.bias;
      std::get<2>(it->second) += 1;
    }
  }
  BiasTable out;
  for (const auto& [word, t] : acc) {
    const auto& [axis, sum, runs] = t;
    if (runs == tables.size()) {
      out.entries.push_back({word, axis, sum / static_cast<double>(runs)});
    } else {
      out.skipped.push_back(word + ": present in only " +
                            std::to_string(runs) + " of " +
                            std::to_string(tables.size()) + " runs");
    }
  }
  return out;
}

BiasTable averaged_shuffled_bias(const std::vector<Sentence>& corpus,
                                 const Vocabulary& vocab,
                                 const ContextWordLists& lists,
                                 const ShufflePlan& plan,
                                 const ShuffledBiasConfig& cfg,
                                 std::vector<BiasTable>* per_seed) {
  plan.validate();
  if (!lists.resolved()) {
    throw ConfigError("context word lists are not resolved against the "
                      "vocabulary");
  }
  std::vector<BiasTable> tables(plan.seeds.size());
  std::vector<std::string> failures(plan.seeds.size());

  auto run_seed = [&](std::size_t k) {
    try {
      const auto shuffled = shuffled_copy(corpus, plan.seeds[k]);
      tables[k] = single_run(shuffled, vocab, lists, cfg);
    } catch (const std::exception& e) {
      failures[k] = e.what();
    }
  };

  const int jobs = std::max(1, cfg.jobs);
  if (jobs == 1) {
    for (std::size_t k = 0; k < plan.seeds.size(); ++k) run_seed(k);
  } else {
    std::vector<std::thread> pool;
    std::size_t next = 0;
    for (int j = 0; j < jobs && next < plan.seeds.size(); ++j) {
      pool.emplace_back([&, j] {
        for (std::size_t k = j; k < plan.seeds.size();
             k += static_cast<std::size_t>(jobs)) {
          run_seed(k);
        }
      });
      ++next;
    }
    for (auto& th : pool) th.join();
  }

  for (std::size_t k = 0; k < plan.seeds.size(); ++k) {
    if (!failures[k].empty()) {
      throw DataError("shuffled run with seed " +
                      std::to_string(plan.seeds[k]) +
                      " failed: " + failures[k]);
    }
  }

  BiasTable averaged = average_bias_tables(tables);
  // Per-run skips drop the word from the average as well.
  for (const auto& table : tables) {
    for (const auto& s : table.skipped) averaged.skipped.push_back(s);
  }
  if (per_seed) *per_seed = std::move(tables);
  return averaged;
}

}  // namespace corpusbias
