#include "corpusbias/we_bias.hpp"

#include <vector>

#include "corpusbias/error.hpp"

namespace corpusbias {

namespace {

// Resolves both groups against the embedding; missing words are a hard
// error because silently averaging over fewer words changes the metric.
std::pair<std::vector<WordId>, std::vector<WordId>> resolve_groups(
    const EmbeddingMatrix& emb, const ContextWordLists& lists) {
  std::vector<WordId> a, b;
  std::vector<std::string> missing;
  for (const auto& w : lists.group_a) {
    if (auto id = emb.find(w)) {
      a.push_back(*id);
    } else {
      missing.push_back(w);
    }
  }
  for (const auto& w : lists.group_b) {
    if (auto id = emb.find(w)) {
      b.push_back(*id);
    } else {
      missing.push_back(w);
    }
  }
  if (!missing.empty()) {
    std::string msg = "context words missing from embedding:";
    for (const auto& w : missing) msg += " " + w;
    throw ConfigError(msg);
  }
  return {std::move(a), std::move(b)};
}

double group_mean_cosine(const EmbeddingMatrix& emb, WordId x,
                         std::span<const WordId> group) {
  double sum = 0.0;
  for (WordId y : group) {
    try {
      sum += cosine(emb.vec(x), emb.vec(y));
    } catch (const DataError&) {
      throw DataError("zero-norm vector for word `" + emb.word(y) + "` or `" +
                      emb.word(x) + "`");
    }
  }
  return sum / static_cast<double>(group.size());
}

double bias_we_resolved(const EmbeddingMatrix& emb, WordId x,
                        std::span<const WordId> a,
                        std::span<const WordId> b) {
  return group_mean_cosine(emb, x, a) - group_mean_cosine(emb, x, b);
}

}  // namespace

double bias_we(const EmbeddingMatrix& emb, std::string_view word,
               const ContextWordLists& lists) {
  const auto [a, b] = resolve_groups(emb, lists);
  const auto x = emb.find(word);
  if (!x) {
    throw DataError("word `" + std::string(word) + "` not in embedding");
  }
  return bias_we_resolved(emb, *x, a, b);
}

BiasTable bias_table_we(const EmbeddingMatrix& emb,
                        const ContextWordLists& lists, const Vocabulary* vocab,
                        bool include_context_words) {
  const auto [a, b] = resolve_groups(emb, lists);
  BiasTable table;
  table.entries.reserve(emb.size());
  for (WordId id = 0; id < emb.size(); ++id) {
    const std::string& w = emb.word(id);
    if (!include_context_words && lists.is_context_word(w)) continue;
    double axis;
    if (vocab) {
      const auto vid = vocab->find(w);
      if (!vid) {
        table.skipped.push_back(w + ": not in vocabulary");
        continue;
      }
      axis = static_cast<double>(vocab->freq(*vid));
    } else {
      axis = static_cast<double>(id) + 1.0;  // file rank
    }
    try {
      table.entries.push_back({w, axis, bias_we_resolved(emb, id, a, b)});
    } catch (const DataError& e) {
      table.skipped.push_back(w + ": " + e.what());
    }
  }
  return table;
}

}  // namespace corpusbias
