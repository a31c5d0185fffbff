#pragma once

#include <string_view>

#include "corpusbias/bias_table.hpp"
#include "corpusbias/corpus.hpp"
#include "corpusbias/embedding.hpp"

namespace corpusbias {

// mean_{a in A} cos(v_x, v_a) - mean_{b in B} cos(v_x, v_b), in [-2, 2].
// Positive = female-biased (closer to group A). Context words missing from
// the embedding are a ConfigError; a missing or zero-norm target word is a
// DataError naming the word.
double bias_we(const EmbeddingMatrix& emb, std::string_view word,
               const ContextWordLists& lists);

// bias_we for every embedding word, context words excluded unless
// include_context_words. Per-word failures (missing vector against a
// separate vocabulary, degenerate vector) are recorded in skipped, not
// fatal. The axis column is the corpus frequency when vocab is non-null,
// otherwise the word's 1-based file rank (pretrained files list words by
// descending frequency).
BiasTable bias_table_we(const EmbeddingMatrix& emb,
                        const ContextWordLists& lists,
                        const Vocabulary* vocab = nullptr,
                        bool include_context_words = false);

}  // namespace corpusbias
