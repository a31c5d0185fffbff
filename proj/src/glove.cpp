#include "corpusbias/glove.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "corpusbias/error.hpp"
#include "corpusbias/rng.hpp"

namespace corpusbias {

namespace {

double weight_fn(double x, const GloveConfig& cfg) {
  return x < cfg.x_max ? std::pow(x / cfg.x_max, cfg.alpha) : 1.0;
}

struct Record {
  WordId i;
  WordId j;
  double x;
  double log_x;
};

struct GloveParams {
  std::vector<double> w;        // target vectors
  std::vector<double> wt;       // context vectors
  std::vector<double> b;        // target biases
  std::vector<double> bt;       // context biases
  std::vector<double> gsq_w;    // AdaGrad accumulators, init 1.0
  std::vector<double> gsq_wt;
  std::vector<double> gsq_b;
  std::vector<double> gsq_bt;
};

double glove_pass(std::span<const Record> records, GloveParams& p,
                  std::size_t dim, const GloveConfig& cfg) {
  double total = 0.0;
  for (const Record& r : records) {
    double* wi = p.w.data() + r.i * dim;
    double* wj = p.wt.data() + r.j * dim;
    double diff = p.b[r.i] + p.bt[r.j] - r.log_x;
    for (std::size_t d = 0; d < dim; ++d) diff += wi[d] * wj[d];
    const double f = weight_fn(r.x, cfg);
    total += f * diff * diff;
    const double g = 2.0 * f * diff;
    // Update with the accumulator as of this step, then fold in the new
    // square (reference implementation order).
    for (std::size_t d = 0; d < dim; ++d) {
      const double gwi = g * wj[d];
      const double gwj = g * wi[d];
      wi[d] -= cfg.step_size * gwi / std::sqrt(p.gsq_w[r.i * dim + d]);
      wj[d] -= cfg.step_size * gwj / std::sqrt(p.gsq_wt[r.j * dim + d]);
      p.gsq_w[r.i * dim + d] += gwi * gwi;
      p.gsq_wt[r.j * dim + d] += gwj * gwj;
    }
    p.b[r.i] -= cfg.step_size * g / std::sqrt(p.gsq_b[r.i]);
    p.bt[r.j] -= cfg.step_size * g / std::sqrt(p.gsq_bt[r.j]);
    p.gsq_b[r.i] += g * g;
    p.gsq_bt[r.j] += g * g;
  }
  return total;
}

}  // namespace

GloveGradients glove_loss_and_gradient(std::span<const double> wi,
                                       std::span<const double> wj, double bi,
                                       double bj, double x,
                                       const GloveConfig& cfg) {
  if (!(x > 0.0)) {
    throw DataError("GloVe loss needs a positive co-occurrence count, got " +
                    std::to_string(x));
  }
  if (wi.size() != wj.size()) {
    throw DataError("glove_loss_and_gradient: dimension mismatch");
  }
  double diff = bi + bj - std::log(x);
  for (std::size_t d = 0; d < wi.size(); ++d) diff += wi[d] * wj[d];
  const double f = weight_fn(x, cfg);
  GloveGradients g;
  g.loss = f * diff * diff;
  const double common = 2.0 * f * diff;
  g.d_wi.resize(wi.size());
  g.d_wj.resize(wi.size());
  for (std::size_t d = 0; d < wi.size(); ++d) {
    g.d_wi[d] = common * wj[d];
    g.d_wj[d] = common * wi[d];
  }
  g.d_bi = common;
  g.d_bj = common;
  return g;
}

EmbeddingMatrix train_glove(const CoocCounts& counts, const Vocabulary& vocab,
                            const GloveConfig& cfg,
                            std::vector<double>* iteration_loss) {
  if (cfg.dim < 1 || cfg.iterations < 0 || cfg.x_max <= 0.0 ||
      cfg.step_size <= 0.0) {
    throw ConfigError("invalid GloVe configuration");
  }
  if (counts.vocab_size() != vocab.size()) {
    throw ConfigError("co-occurrence counts and vocabulary disagree on size");
  }
  if (counts.distinct_pairs() == 0) {
    throw DataError("GloVe training needs non-empty co-occurrence counts");
  }
  const auto dim = static_cast<std::size_t>(cfg.dim);
  const std::size_t v = vocab.size();

  GloveParams p;
  p.w.resize(v * dim);
  p.wt.resize(v * dim);
  p.b.assign(v, 0.0);
  p.bt.assign(v, 0.0);
  Rng rng(cfg.seed);
  const double r0 = 0.5 / static_cast<double>(dim);
  for (auto& x : p.w) x = rng.uniform(-r0, r0);
  for (auto& x : p.wt) x = rng.uniform(-r0, r0);

  if (cfg.iterations > 0) {
    p.gsq_w.assign(v * dim, 1.0);
    p.gsq_wt.assign(v * dim, 1.0);
    p.gsq_b.assign(v, 1.0);
    p.gsq_bt.assign(v, 1.0);

    // Each off-diagonal cell feeds both orientations; the diagonal cell
    // already carries both directions of its counts and feeds one record.
    std::vector<Record> records;
    records.reserve(counts.distinct_pairs() * 2);
    for (const auto& [i, j, x] : counts.sorted_cells()) {
      const double lx = std::log(x);
      records.push_back({i, j, x, lx});
      if (i != j) records.push_back({j, i, x, lx});
    }
    for (std::size_t k = records.size() - 1; k > 0; --k) {
      std::swap(records[k], records[rng.below(k + 1)]);
    }

    const int threads = std::max(1, cfg.threads);
    for (int iter = 0; iter < cfg.iterations; ++iter) {
      double total = 0.0;
      if (threads == 1) {
        total = glove_pass(records, p, dim, cfg);
      } else {
        std::vector<std::thread> pool;
        std::vector<double> partial(threads, 0.0);
        const std::size_t chunk = (records.size() + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
          const std::size_t begin = std::min(records.size(), t * chunk);
          const std::size_t end = std::min(records.size(), begin + chunk);
          if (begin >= end) break;
          pool.emplace_back([&, t, begin, end] {
            partial[t] = glove_pass(
                std::span<const Record>(records).subspan(begin, end - begin),
                p, dim, cfg);
          });
        }
        for (auto& th : pool) th.join();
        for (double x : partial) total += x;
      }
      if (iteration_loss) iteration_loss->push_back(total);
    }
  }

  EmbeddingMatrix emb(vocab.words(), dim);
  emb.enable_context_vectors();
  for (WordId id = 0; id < v; ++id) {
    auto out = emb.vec(id);
    auto ctx = emb.context_vec(id);
    for (std::size_t d = 0; d < dim; ++d) {
      out[d] = p.w[id * dim + d] + p.wt[id * dim + d];
      ctx[d] = p.wt[id * dim + d];
    }
  }
  return emb;
}

}  // namespace corpusbias
