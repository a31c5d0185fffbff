#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "corpusbias/corpus.hpp"
#include "corpusbias/embedding.hpp"
#include "corpusbias/rng.hpp"

namespace corpusbias {

struct SgnsConfig {
  int dim = 100;
  int window = 10;        // dynamic: effective half-window uniform in 1..window
  int negatives = 5;
  int epochs = 5;
  double step_size = 0.025;  // linearly decayed to 1e-4 of itself
  double subsample = 1e-3;   // frequency subsampling threshold; 0 disables
  double noise_exponent = 0.75;
  std::uint64_t seed = 1;
  int threads = 1;  // > 1: lock-free shared updates, not bit-reproducible
};

struct SgnsGradients {
  double loss = 0.0;
  std::vector<double> d_target;
  std::vector<double> d_context;
  std::vector<std::vector<double>> d_noise;
};

// Negative-sampling loss for one (target, context) pair with k noise words:
//   -log sigma(t.c) - sum_n log sigma(-t.n)
// plus exact analytic gradients. log sigma is evaluated in log-space, so
// saturated pairs (|dot| > 700) stay finite.
SgnsGradients sgns_loss_and_gradient(
    std::span<const double> target, std::span<const double> context,
    const std::vector<std::span<const double>>& noise);

// Alias-method sampler over freq^exponent (or arbitrary positive weights).
class NoiseTable {
 public:
  NoiseTable(std::span<const std::uint64_t> freqs, double exponent);
  explicit NoiseTable(std::span<const double> weights);
  WordId sample(Rng& rng) const;
  double prob(WordId id) const { return weight_[id]; }  // normalized
  std::size_t size() const { return weight_.size(); }

 private:
  void build(std::vector<double> weights);

  std::vector<double> threshold_;
  std::vector<WordId> alias_;
  std::vector<double> weight_;
};

// Skip-gram with negative sampling over OOV-filtered sentences. Dynamic
// window, subsampling and noise draws follow the word2vec/Gensim
// conventions; the returned matrix holds the input vectors as target
// vectors and retains the output vectors as context vectors. Single-worker
// runs with a fixed seed are bit-reproducible.
EmbeddingMatrix train_sgns(const std::vector<Sentence>& corpus,
                           const Vocabulary& vocab, const SgnsConfig& config);

}  // namespace corpusbias
