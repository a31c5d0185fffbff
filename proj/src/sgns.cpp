#include "corpusbias/sgns.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "corpusbias/error.hpp"

namespace corpusbias {

namespace {

double sigmoid(double z) {
  if (z >= 0.0) {
    const double e = std::exp(-z);
    return 1.0 / (1.0 + e);
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double log_sigmoid(double z) {
  return z >= 0.0 ? -std::log1p(std::exp(-z)) : z - std::log1p(std::exp(z));
}

double dot(std::span<const double> u, std::span<const double> v) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
  return s;
}

}  // namespace

SgnsGradients sgns_loss_and_gradient(
    std::span<const double> target, std::span<const double> context,
    const std::vector<std::span<const double>>& noise) {
  const std::size_t dim = target.size();
  if (context.size() != dim) {
    throw DataError("sgns_loss_and_gradient: dimension mismatch");
  }
  SgnsGradients g;
  g.d_target.assign(dim, 0.0);
  g.d_context.assign(dim, 0.0);
  g.d_noise.resize(noise.size());

  const double zp = dot(target, context);
  g.loss = -log_sigmoid(zp);
  const double gp = sigmoid(zp) - 1.0;  // d loss / d zp
  for (std::size_t i = 0; i < dim; ++i) {
    g.d_target[i] = gp * context[i];
    g.d_context[i] = gp * target[i];
  }
  for (std::size_t n = 0; n < noise.size(); ++n) {
    if (noise[n].size() != dim) {
      throw DataError("sgns_loss_and_gradient: noise dimension mismatch");
    }
    const double zn = dot(target, noise[n]);
    g.loss -= log_sigmoid(-zn);
    const double gn = sigmoid(zn);
    g.d_noise[n].assign(dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i) {
      g.d_target[i] += gn * noise[n][i];
      g.d_noise[n][i] = gn * target[i];
    }
  }
  return g;
}

NoiseTable::NoiseTable(std::span<const std::uint64_t> freqs, double exponent) {
  std::vector<double> weights(freqs.size());
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    weights[i] = std::pow(static_cast<double>(freqs[i]), exponent);
  }
  build(std::move(weights));
}

NoiseTable::NoiseTable(std::span<const double> weights) {
  build(std::vector<double>(weights.begin(), weights.end()));
}

void NoiseTable::build(std::vector<double> weights) {
  const std::size_t n = weights.size();
  if (n == 0) throw DataError("noise table needs a non-empty vocabulary");
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw DataError("noise table weights must be >= 0");
    total += w;
  }
  if (!(total > 0.0)) throw DataError("noise table has zero total mass");
  for (auto& w : weights) w /= total;
  weight_ = weights;

  // Vose's alias construction.
  threshold_.assign(n, 0.0);
  alias_.assign(n, 0);
  std::vector<double>& scaled = weights;
  std::vector<std::size_t> small, large;
  for (std::size_t i = 0; i < n; ++i) {
    scaled[i] *= static_cast<double>(n);
    (scaled[i] < 1.0 ? small : large).push_back(i);
  }
  while (!small.empty() && !large.empty()) {
    const std::size_t s = small.back();
    const std::size_t l = large.back();
    small.pop_back();
    large.pop_back();
    threshold_[s] = scaled[s];
    alias_[s] = static_cast<WordId>(l);
    scaled[l] = scaled[l] + scaled[s] - 1.0;
    (scaled[l] < 1.0 ? small : large).push_back(l);
  }
  for (std::size_t i : large) threshold_[i] = 1.0;
  for (std::size_t i : small) threshold_[i] = 1.0;
}

WordId NoiseTable::sample(Rng& rng) const {
  const auto k = static_cast<std::size_t>(rng.below(threshold_.size()));
  return rng.unit() < threshold_[k] ? static_cast<WordId>(k) : alias_[k];
}

namespace {

struct SgnsShared {
  double* input;    // |V| x dim, the word vectors
  double* output;   // |V| x dim, the context vectors
  std::size_t dim;
  const NoiseTable* noise;
  const std::vector<double>* keep_prob;  // subsampling, empty when disabled
  std::atomic<std::uint64_t> progress{0};
  std::uint64_t total_tokens = 0;
};

void sgns_worker(const std::vector<Sentence>& corpus, std::size_t begin,
                 std::size_t end, const SgnsConfig& cfg, SgnsShared& shared,
                 std::uint64_t worker_seed) {
  Rng rng(worker_seed);
  const std::size_t dim = shared.dim;
  std::vector<double> grad_in(dim);
  Sentence kept;
  std::uint64_t local_progress = 0;
  double alpha = cfg.step_size;
  const double min_alpha = cfg.step_size * 1e-4;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (std::size_t s = begin; s < end; ++s) {
      const Sentence& sentence = corpus[s];
      local_progress += sentence.size();
      if (local_progress >= 10000) {
        const auto done =
            shared.progress.fetch_add(local_progress) + local_progress;
        local_progress = 0;
        alpha = cfg.step_size *
                std::max(1e-4, 1.0 - static_cast<double>(done) /
                                         (static_cast<double>(
                                              shared.total_tokens) +
                                          1.0));
        alpha = std::max(alpha, min_alpha);
      }
      kept.clear();
      for (WordId id : sentence) {
        if (shared.keep_prob && (*shared.keep_prob)[id] < 1.0 &&
            rng.unit() > (*shared.keep_prob)[id]) {
          continue;
        }
        kept.push_back(id);
      }
      const std::size_t n = kept.size();
      if (n < 2) continue;
      for (std::size_t i = 0; i < n; ++i) {
        const WordId center = kept[i];
        const auto reduced = static_cast<std::size_t>(
            cfg.window - static_cast<int>(rng.below(
                             static_cast<std::uint64_t>(cfg.window))));
        const std::size_t lo = i >= reduced ? i - reduced : 0;
        const std::size_t hi = std::min(n, i + reduced + 1);
        for (std::size_t j = lo; j < hi; ++j) {
          if (j == i) continue;
          // word2vec convention: the window word is the input, the center
          // word is the positive output.
          double* in = shared.input + kept[j] * dim;
          std::fill(grad_in.begin(), grad_in.end(), 0.0);
          for (int m = -1; m < cfg.negatives; ++m) {
            WordId out_word;
            double label;
            if (m < 0) {
              out_word = center;
              label = 1.0;
            } else {
              out_word = shared.noise->sample(rng);
              for (int tries = 0; out_word == center && tries < 16; ++tries) {
                out_word = shared.noise->sample(rng);
              }
              if (out_word == center) continue;
              label = 0.0;
            }
            double* out = shared.output + out_word * dim;
            double z = 0.0;
            for (std::size_t d = 0; d < dim; ++d) z += in[d] * out[d];
            const double g = (label - sigmoid(z)) * alpha;
            for (std::size_t d = 0; d < dim; ++d) {
              grad_in[d] += g * out[d];
              out[d] += g * in[d];
            }
          }
          for (std::size_t d = 0; d < dim; ++d) in[d] += grad_in[d];
        }
      }
    }
  }
}

}  // namespace

EmbeddingMatrix train_sgns(const std::vector<Sentence>& corpus,
                           const Vocabulary& vocab, const SgnsConfig& cfg) {
  if (cfg.dim < 1 || cfg.window < 1 || cfg.negatives < 0 || cfg.epochs < 0 ||
      cfg.step_size <= 0.0) {
    throw ConfigError("invalid SGNS configuration");
  }
  const auto dim = static_cast<std::size_t>(cfg.dim);

  EmbeddingMatrix emb(vocab.words(), dim);
  emb.enable_context_vectors();
  Rng init_rng(cfg.seed);
  double* input = emb.target_data();
  for (std::size_t i = 0; i < vocab.size() * dim; ++i) {
    input[i] = init_rng.uniform(-0.5 / static_cast<double>(dim),
                                0.5 / static_cast<double>(dim));
  }
  // Output vectors start at zero (word2vec convention).

  if (cfg.epochs == 0) return emb;

  std::uint64_t corpus_tokens = 0;
  bool has_pair = false;
  for (const auto& s : corpus) {
    corpus_tokens += s.size();
    if (s.size() >= 2) has_pair = true;
  }
  if (!has_pair) {
    throw DataError("SGNS training corpus yields no (target, context) pairs");
  }

  NoiseTable noise(vocab.freqs(), cfg.noise_exponent);

  std::vector<double> keep_prob;
  if (cfg.subsample > 0.0) {
    keep_prob.resize(vocab.size());
    const double st = cfg.subsample * static_cast<double>(vocab.total_tokens());
    for (WordId id = 0; id < vocab.size(); ++id) {
      const auto f = static_cast<double>(vocab.freq(id));
      keep_prob[id] = std::min(1.0, (std::sqrt(f / st) + 1.0) * st / f);
    }
  }

  SgnsShared shared;
  shared.input = emb.target_data();
  shared.output = emb.context_data();
  shared.dim = dim;
  shared.noise = &noise;
  shared.keep_prob = keep_prob.empty() ? nullptr : &keep_prob;
  shared.total_tokens =
      corpus_tokens * static_cast<std::uint64_t>(cfg.epochs);

  const int threads = std::max(1, cfg.threads);
  if (threads == 1) {
    sgns_worker(corpus, 0, corpus.size(), cfg, shared, cfg.seed + 1);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (corpus.size() + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      const std::size_t begin = std::min(corpus.size(), t * chunk);
      const std::size_t end = std::min(corpus.size(), begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(sgns_worker, std::cref(corpus), begin, end,
                        std::cref(cfg), std::ref(shared),
                        cfg.seed + 1 + static_cast<std::uint64_t>(t));
    }
    for (auto& th : pool) th.join();
  }
  return emb;
}

}  // namespace corpusbias
