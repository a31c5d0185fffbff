#pragma once

#include <cstdint>
#include <filesystem>

namespace corpusbias {

// Deterministic synthetic English-like corpus for demos and scale tests.
// No natural corpus ships with the repo, so this generator produces raw
// documents (one per line, with casing and punctuation for the
// preprocessor to strip) whose statistics mirror a natural corpus:
//   - a Zipf content tail plus a heavy function-word head,
//   - the sixteen gendered context words at natural relative frequencies
//     (male forms ~3x the female total), floored so every one of them
//     survives frequency filtering at the target scale,
//   - document-level topics that tilt both content words and gendered
//     words, so co-occurrence structure is real before any shuffling,
//   - a sprinkle of digit tokens, UTF-8 punctuation and sub-minimum
//     documents to exercise the ingestion rules.
struct SynthConfig {
  std::uint64_t tokens = 100000;  // approximate budget, reached within one doc
  std::uint64_t seed = 42;
  std::size_t content_types = 30000;
  // Minimum share per gendered word. 1e-3 keeps all sixteen above a
  // min-count of 25 at 1e5 tokens; 4e-5 keeps them above 100 at 2e7.
  double gender_floor = 1e-3;
};

void write_synth_corpus(const std::filesystem::path& path,
                        const SynthConfig& config);

}  // namespace corpusbias
