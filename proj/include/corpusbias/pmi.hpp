#pragma once

#include <span>
#include <string_view>

#include "corpusbias/bias_table.hpp"
#include "corpusbias/cooccurrence.hpp"
#include "corpusbias/corpus.hpp"

namespace corpusbias {

enum class LogBase { natural, base2, base10 };

std::string to_string(LogBase b);
LogBase log_base_from_string(std::string_view s);

struct PmiConfig {
  // Added to the group co-occurrence count only; denominators stay
  // unsmoothed. epsilon = 0 is permitted only when every required count is
  // positive.
  double epsilon = 0.01;
  LogBase log_base = LogBase::natural;
};

// (group_count(x, Y) + epsilon) / group_total(Y). Throws DataError naming
// the group when group_total(Y) is zero.
double conditional_prob(const CoocCounts& counts, WordId x,
                        std::span<const WordId> group, double epsilon,
                        std::string_view group_name = "group");

// log[ P(x,Y) / (P(x) P(Y)) ] with P(x,Y) = (group_count + eps)/grand,
// P(x) = target_total(x)/grand, P(Y) = group_total(Y)/grand. Throws
// DataError on zero marginals, or when epsilon = 0 meets a zero
// co-occurrence count.
double pmi(const CoocCounts& counts, WordId x, std::span<const WordId> group,
           const PmiConfig& config, std::string_view group_name = "group");

// log( P(x|A) / P(x|B) ). Positive = female-biased (closer to group A).
double bias_pmi(const CoocCounts& counts, WordId x,
                const ContextWordLists& lists, const PmiConfig& config);

// bias_pmi for every vocabulary word; context words excluded unless
// include_context_words. Axis column carries corpus frequency.
BiasTable bias_table_pmi(const CoocCounts& counts, const Vocabulary& vocab,
                         const ContextWordLists& lists, const PmiConfig& config,
                         bool include_context_words = false);

}  // namespace corpusbias
