#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace corpusbias {

// One scored target word: `axis` is the word's corpus frequency, or its
// frequency rank when raw frequencies are unavailable (pretrained vectors).
struct BiasEntry {
  std::string word;
  double axis = 0.0;
  double bias = 0.0;
};

struct BiasTable {
  std::vector<BiasEntry> entries;
  // Words excluded with a reason (missing vector, degenerate vector, failed
  // in one shuffle run, ...).
  std::vector<std::string> skipped;
};

// TSV `word<TAB>frequency_or_rank<TAB>bias`. Skipped words are not written;
// callers report them separately.
void save_bias_tsv(const std::filesystem::path& path, const BiasTable& table);
BiasTable load_bias_tsv(const std::filesystem::path& path);

}  // namespace corpusbias
