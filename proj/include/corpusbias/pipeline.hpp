#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "corpusbias/cooccurrence.hpp"
#include "corpusbias/corpus.hpp"
#include "corpusbias/embedding.hpp"
#include "corpusbias/glove.hpp"
#include "corpusbias/pmi.hpp"
#include "corpusbias/report_io.hpp"
#include "corpusbias/sgns.hpp"
#include "corpusbias/shuffle.hpp"
#include "corpusbias/stats.hpp"

namespace corpusbias {

inline constexpr const char* kToolVersion = "0.1.0";

// One JSON configuration drives a whole experiment; every CLI flag is an
// override of a config key.
struct ExperimentConfig {
  std::vector<std::filesystem::path> corpus_paths;
  PreprocessOptions preprocess;
  std::uint64_t min_count = 100;
  int window = 10;
  Weighting pmi_weighting = Weighting::flat;
  Weighting glove_weighting = Weighting::harmonic;
  std::vector<std::string> metrics{"pmi"};  // pmi|sgns|glove|pretrained
  std::filesystem::path pretrained_path;
  VectorFormat pretrained_format = VectorFormat::glove_text;
  PmiConfig pmi;
  SgnsConfig sgns;
  GloveConfig glove;
  std::optional<ShufflePlan> shuffle;  // adds the shuffled-control experiment
  BinScheme bins = BinScheme::default_frequency();
  ContextWordLists lists;
  std::filesystem::path context_words_path;  // empty when lists are inline
  std::filesystem::path out_dir = "out";
  std::uint64_t seed = 1;
  int threads = 1;
  int jobs = 1;  // parallel shuffle-seed runs
  bool include_context_words = false;

  static ExperimentConfig load(const std::filesystem::path& json_path);
  nlohmann::json to_json() const;
  void validate() const;
};

struct StageRecord {
  std::string name;
  std::string key;  // content-hash cache key
  bool cache_hit = false;
  double seconds = 0.0;
  std::vector<std::string> outputs;        // paths relative to out_dir
  std::vector<std::string> output_hashes;  // hex64 per output
};

struct RunManifest {
  std::string tool_version;
  nlohmann::json config;
  std::map<std::string, std::string> input_hashes;  // path -> hex64
  std::vector<StageRecord> stages;
  double total_seconds = 0.0;

  nlohmann::json to_json() const;
  // Written atomically (temp file + rename).
  void save(const std::filesystem::path& path) const;
};

// preprocess -> vocab -> (shuffle)* -> cooc/train -> bias -> bins, with
// every stage cached by input content hash under out_dir. Reruns with
// unchanged inputs are pure cache hits. Stage failures are rethrown with
// the stage name; completed stages stay cached, so a rerun resumes after
// the last completed stage.
RunManifest run_pipeline(const ExperimentConfig& config,
                         bool force_recompute = false);

// Per-context-word frequency table, one block per group, descending
// frequency within each: `group<TAB>word<TAB>frequency`.
void frequency_report(const Vocabulary& vocab, const ContextWordLists& lists,
                      std::ostream& out);

}  // namespace corpusbias
