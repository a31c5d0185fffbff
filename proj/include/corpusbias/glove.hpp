#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "corpusbias/cooccurrence.hpp"
#include "corpusbias/corpus.hpp"
#include "corpusbias/embedding.hpp"

namespace corpusbias {

struct GloveConfig {
  int dim = 100;
  int iterations = 100;
  double x_max = 100.0;
  double alpha = 0.75;       // weighting-function exponent
  double step_size = 0.05;   // AdaGrad
  std::uint64_t seed = 1;
  int threads = 1;  // > 1: lock-free shared updates, not bit-reproducible
};

struct GloveGradients {
  double loss = 0.0;  // f(X) * (w_i.w~_j + b_i + b~_j - log X)^2
  std::vector<double> d_wi;
  std::vector<double> d_wj;
  double d_bi = 0.0;
  double d_bj = 0.0;
};

// Single-pair weighted least-squares term with exact analytic gradients.
// f(x) = (x / x_max)^alpha for x < x_max, else 1. Throws DataError when
// x <= 0.
GloveGradients glove_loss_and_gradient(std::span<const double> wi,
                                       std::span<const double> wj, double bi,
                                       double bj, double x,
                                       const GloveConfig& config);

// AdaGrad over the nonzero cells (each off-diagonal cell trains both
// orientations), shuffled once with the seeded generator. Returned target
// vectors are the target + context sums (GloVe convention); the raw context
// vectors are retained. Single-worker runs with a fixed seed are
// bit-reproducible. When iteration_loss is non-null it receives the total
// objective after each iteration.
EmbeddingMatrix train_glove(const CoocCounts& counts, const Vocabulary& vocab,
                            const GloveConfig& config,
                            std::vector<double>* iteration_loss = nullptr);

}  // namespace corpusbias
