#include "corpusbias/pmi.hpp"

#include <cmath>

#include "corpusbias/error.hpp"

namespace corpusbias {

namespace {

double scale_log(double ln_value, LogBase base) {
  switch (base) {
    case LogBase::natural:
      return ln_value;
    case LogBase::base2:
      return ln_value / std::log(2.0);
    case LogBase::base10:
      return ln_value / std::log(10.0);
  }
  return ln_value;
}

double checked_log(double value, WordId x, std::string_view group_name,
                   const char* what) {
  if (!(value > 0.0)) {
    throw DataError(std::string(what) + " is zero for word id " +
                    std::to_string(x) + " against " + std::string(group_name) +
                    " and epsilon = 0 (no smoothing)");
  }
  return std::log(value);
}

}  // namespace

std::string to_string(LogBase b) {
  switch (b) {
    case LogBase::natural:
      return "natural";
    case LogBase::base2:
      return "base2";
    case LogBase::base10:
      return "base10";
  }
  return "natural";
}

LogBase log_base_from_string(std::string_view s) {
  if (s == "natural") return LogBase::natural;
  if (s == "base2") return LogBase::base2;
  if (s == "base10") return LogBase::base10;
  throw ConfigError("unknown log base `" + std::string(s) +
                    "` (expected natural|base2|base10)");
}

double conditional_prob(const CoocCounts& counts, WordId x,
                        std::span<const WordId> group, double epsilon,
                        std::string_view group_name) {
  const double total = counts.group_total(group);
  if (!(total > 0.0)) {
    throw DataError("context group " + std::string(group_name) +
                    " has zero co-occurrence total; P(x|" +
                    std::string(group_name) + ") is undefined");
  }
  return (counts.group_count(x, group) + epsilon) / total;
}

double pmi(const CoocCounts& counts, WordId x, std::span<const WordId> group,
           const PmiConfig& config, std::string_view group_name) {
  const double grand = counts.grand_total();
  const double tx = counts.target_total(x);
  const double ty = counts.group_total(group);
  if (!(grand > 0.0) || !(tx > 0.0) || !(ty > 0.0)) {
    throw DataError("PMI undefined: zero marginal for word id " +
                    std::to_string(x) + " or group " +
                    std::string(group_name));
  }
  const double joint = counts.group_count(x, group) + config.epsilon;
  const double ln = checked_log(joint * grand / (tx * ty), x, group_name,
                                "smoothed joint count");
  return scale_log(ln, config.log_base);
}

double bias_pmi(const CoocCounts& counts, WordId x,
                const ContextWordLists& lists, const PmiConfig& config) {
  const double pa =
      conditional_prob(counts, x, lists.ids_a, config.epsilon, "group_a");
  const double pb =
      conditional_prob(counts, x, lists.ids_b, config.epsilon, "group_b");
  const double ln = checked_log(pa, x, "group_a", "P(x|A)") -
                    checked_log(pb, x, "group_b", "P(x|B)");
  return scale_log(ln, config.log_base);
}

BiasTable bias_table_pmi(const CoocCounts& counts, const Vocabulary& vocab,
                         const ContextWordLists& lists, const PmiConfig& config,
                         bool include_context_words) {
  if (!lists.resolved()) {
    throw ConfigError("context word lists are not resolved against the "
                      "vocabulary");
  }
  BiasTable table;
  table.entries.reserve(vocab.size());
  for (WordId id = 0; id < vocab.size(); ++id) {
    const std::string& w = vocab.word(id);
    if (!include_context_words && lists.is_context_word(w)) continue;
    try {
      table.entries.push_back(
          {w, static_cast<double>(vocab.freq(id)),
           bias_pmi(counts, id, lists, config)});
    } catch (const DataError& e) {
      table.skipped.push_back(w + ": " + e.what());
    }
  }
  return table;
}

}  // namespace corpusbias
