#include "corpusbias/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>

#include "corpusbias/error.hpp"
#include "corpusbias/hash.hpp"
#include "corpusbias/we_bias.hpp"

namespace corpusbias {

namespace {

using nlohmann::json;

std::vector<double> edges_or_default(const json& j, BinScheme::Kind kind) {
  if (j.contains("edges")) return j["edges"].get<std::vector<double>>();
  return kind == BinScheme::Kind::log10_rank
             ? BinScheme::default_rank().edges
             : BinScheme::default_frequency().edges;
}

std::uint64_t seed_or(const json& j, const char* key, std::uint64_t fallback) {
  return j.contains(key) ? j[key].get<std::uint64_t>() : fallback;
}

}  // namespace

ExperimentConfig ExperimentConfig::load(
    const std::filesystem::path& json_path) {
  std::ifstream in(json_path);
  if (!in) throw ConfigError("cannot read config file " + json_path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ParseError(json_path.string() + ": " + e.what());
  }

  ExperimentConfig cfg;
  try {
    if (doc.contains("corpus")) {
      if (doc["corpus"].is_string()) {
        cfg.corpus_paths.push_back(doc["corpus"].get<std::string>());
      } else {
        for (const auto& p : doc["corpus"]) {
          cfg.corpus_paths.push_back(p.get<std::string>());
        }
      }
    }
    if (doc.contains("out_dir")) cfg.out_dir = doc["out_dir"].get<std::string>();
    if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("threads")) cfg.threads = doc["threads"].get<int>();
    if (doc.contains("jobs")) cfg.jobs = doc["jobs"].get<int>();
    if (doc.contains("include_context_words")) {
      cfg.include_context_words = doc["include_context_words"].get<bool>();
    }
    if (doc.contains("preprocess")) {
      const auto& p = doc["preprocess"];
      if (p.contains("min_tokens")) {
        cfg.preprocess.min_tokens = p["min_tokens"].get<std::size_t>();
      }
      if (p.contains("split_sentences")) {
        cfg.preprocess.split_sentences = p["split_sentences"].get<bool>();
      }
    }
    if (doc.contains("vocab") && doc["vocab"].contains("min_count")) {
      cfg.min_count = doc["vocab"]["min_count"].get<std::uint64_t>();
    }
    if (doc.contains("window")) cfg.window = doc["window"].get<int>();
    if (doc.contains("weighting")) {
      cfg.pmi_weighting =
          weighting_from_string(doc["weighting"].get<std::string>());
    }
    if (doc.contains("metrics")) {
      cfg.metrics = doc["metrics"].get<std::vector<std::string>>();
    }
    if (doc.contains("pretrained")) {
      cfg.pretrained_path = doc["pretrained"]["path"].get<std::string>();
      if (doc["pretrained"].contains("format")) {
        cfg.pretrained_format = vector_format_from_string(
            doc["pretrained"]["format"].get<std::string>());
      }
    }
    if (doc.contains("pmi")) {
      const auto& p = doc["pmi"];
      if (p.contains("epsilon")) cfg.pmi.epsilon = p["epsilon"].get<double>();
      if (p.contains("log_base")) {
        cfg.pmi.log_base =
            log_base_from_string(p["log_base"].get<std::string>());
      }
    }
    if (doc.contains("sgns")) {
      const auto& p = doc["sgns"];
      if (p.contains("dim")) cfg.sgns.dim = p["dim"].get<int>();
      if (p.contains("window")) cfg.sgns.window = p["window"].get<int>();
      if (p.contains("negatives")) {
        cfg.sgns.negatives = p["negatives"].get<int>();
      }
      if (p.contains("epochs")) cfg.sgns.epochs = p["epochs"].get<int>();
      if (p.contains("step_size")) {
        cfg.sgns.step_size = p["step_size"].get<double>();
      }
      if (p.contains("subsample")) {
        cfg.sgns.subsample = p["subsample"].get<double>();
      }
      if (p.contains("noise_exponent")) {
        cfg.sgns.noise_exponent = p["noise_exponent"].get<double>();
      }
      cfg.sgns.seed = seed_or(p, "seed", cfg.seed);
    } else {
      cfg.sgns.seed = cfg.seed;
    }
    cfg.sgns.window = doc.contains("sgns") && doc["sgns"].contains("window")
                          ? cfg.sgns.window
                          : cfg.window;
    if (doc.contains("glove")) {
      const auto& p = doc["glove"];
      if (p.contains("dim")) cfg.glove.dim = p["dim"].get<int>();
      if (p.contains("iterations")) {
        cfg.glove.iterations = p["iterations"].get<int>();
      }
      if (p.contains("x_max")) cfg.glove.x_max = p["x_max"].get<double>();
      if (p.contains("alpha")) cfg.glove.alpha = p["alpha"].get<double>();
      if (p.contains("step_size")) {
        cfg.glove.step_size = p["step_size"].get<double>();
      }
      if (p.contains("weighting")) {
        cfg.glove_weighting =
            weighting_from_string(p["weighting"].get<std::string>());
      }
      cfg.glove.seed = seed_or(p, "seed", cfg.seed);
    } else {
      cfg.glove.seed = cfg.seed;
    }
    if (doc.contains("shuffle")) {
      ShufflePlan plan;
      const auto& s = doc["shuffle"];
      if (s.contains("seeds")) {
        plan.seeds = s["seeds"].get<std::vector<std::uint64_t>>();
      } else {
        plan = ShufflePlan::consecutive(
            seed_or(s, "base_seed", cfg.seed * 1000 + 1),
            s.contains("count") ? s["count"].get<std::size_t>() : 5);
      }
      plan.validate();
      cfg.shuffle = std::move(plan);
    }
    if (doc.contains("bins")) {
      const auto& b = doc["bins"];
      cfg.bins.kind = b.contains("kind") && b["kind"] == "log10_rank"
                          ? BinScheme::Kind::log10_rank
                          : BinScheme::Kind::log10_frequency;
      cfg.bins.edges = edges_or_default(b, cfg.bins.kind);
      cfg.bins.validate();
    }
    if (doc.contains("context_words")) {
      if (doc["context_words"].is_string()) {
        cfg.context_words_path = doc["context_words"].get<std::string>();
        // Resolve relative to the config file location.
        if (cfg.context_words_path.is_relative()) {
          cfg.context_words_path =
              json_path.parent_path() / cfg.context_words_path;
        }
        cfg.lists = ContextWordLists::load_json(cfg.context_words_path);
      } else {
        cfg.lists = ContextWordLists::from_words(
            doc["context_words"]["group_a"].get<std::vector<std::string>>(),
            doc["context_words"]["group_b"].get<std::vector<std::string>>());
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(json_path.string() + ": " + e.what());
  }
  return cfg;
}

void ExperimentConfig::validate() const {
  if (corpus_paths.empty() &&
      !(metrics.size() == 1 && metrics[0] == "pretrained")) {
    throw ConfigError("config needs at least one corpus path");
  }
  for (const auto& p : corpus_paths) {
    if (!std::filesystem::exists(p)) {
      throw ConfigError("corpus path does not exist: " + p.string());
    }
  }
  if (metrics.empty()) throw ConfigError("config selects no metrics");
  for (const auto& m : metrics) {
    if (m != "pmi" && m != "sgns" && m != "glove" && m != "pretrained") {
      throw ConfigError("unknown metric `" + m + "`");
    }
    if (m == "pretrained") {
      if (pretrained_path.empty() ||
          !std::filesystem::exists(pretrained_path)) {
        throw ConfigError("pretrained metric needs an existing vector file");
      }
    }
  }
  if (lists.group_a.empty() || lists.group_b.empty()) {
    throw ConfigError("config needs context word lists");
  }
  if (window < 1) throw ConfigError("window must be >= 1");
  bins.validate();
}

nlohmann::json ExperimentConfig::to_json() const {
  json doc;
  json corpus = json::array();
  for (const auto& p : corpus_paths) corpus.push_back(p.string());
  doc["corpus"] = corpus;
  doc["preprocess"] = {{"min_tokens", preprocess.min_tokens},
                       {"split_sentences", preprocess.split_sentences}};
  doc["vocab"] = {{"min_count", min_count}};
  doc["window"] = window;
  doc["weighting"] = to_string(pmi_weighting);
  doc["metrics"] = metrics;
  if (!pretrained_path.empty()) {
    doc["pretrained"] = {{"path", pretrained_path.string()},
                         {"format", to_string(pretrained_format)}};
  }
  doc["pmi"] = {{"epsilon", pmi.epsilon},
                {"log_base", to_string(pmi.log_base)}};
  doc["sgns"] = {{"dim", sgns.dim},          {"window", sgns.window},
                 {"negatives", sgns.negatives}, {"epochs", sgns.epochs},
                 {"step_size", sgns.step_size}, {"subsample", sgns.subsample},
                 {"noise_exponent", sgns.noise_exponent},
                 {"seed", sgns.seed}};
  doc["glove"] = {{"dim", glove.dim},
                  {"iterations", glove.iterations},
                  {"x_max", glove.x_max},
                  {"alpha", glove.alpha},
                  {"step_size", glove.step_size},
                  {"weighting", to_string(glove_weighting)},
                  {"seed", glove.seed}};
  if (shuffle) doc["shuffle"] = {{"seeds", shuffle->seeds}};
  doc["bins"] = {{"kind", bins.kind == BinScheme::Kind::log10_rank
                              ? "log10_rank"
                              : "log10_frequency"},
                 {"edges", bins.edges}};
  doc["context_words"] = {{"group_a", lists.group_a},
                          {"group_b", lists.group_b}};
  doc["out_dir"] = out_dir.string();
  doc["seed"] = seed;
  doc["threads"] = threads;
  doc["jobs"] = jobs;
  doc["include_context_words"] = include_context_words;
  return doc;
}

nlohmann::json RunManifest::to_json() const {
  json doc;
  doc["tool_version"] = tool_version;
  doc["config"] = config;
  doc["input_hashes"] = input_hashes;
  doc["total_seconds"] = total_seconds;
  auto& stages_json = doc["stages"] = json::array();
  for (const auto& s : stages) {
    stages_json.push_back({{"name", s.name},
                           {"key", s.key},
                           {"cache_hit", s.cache_hit},
                           {"seconds", s.seconds},
                           {"outputs", s.outputs},
                           {"output_hashes", s.output_hashes}});
  }
  return doc;
}

void RunManifest::save(const std::filesystem::path& path) const {
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw IoError("cannot write manifest " + tmp);
    out << to_json().dump(2) << '\n';
    if (!out) throw IoError("write failed for " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

void frequency_report(const Vocabulary& vocab, const ContextWordLists& lists,
                      std::ostream& out) {
  auto emit_group = [&](const char* name,
                        const std::vector<std::string>& group) {
    std::vector<std::pair<std::string, std::uint64_t>> rows;
    for (const auto& w : group) {
      const auto id = vocab.find(w);
      if (!id) {
        throw ConfigError("context word `" + w + "` not in vocabulary");
      }
      rows.emplace_back(w, vocab.freq(*id));
    }
    std::sort(rows.begin(), rows.end(), [](const auto& x, const auto& y) {
      if (x.second != y.second) return x.second > y.second;
      return x.first < y.first;
    });
    for (const auto& [w, f] : rows) {
      out << name << '\t' << w << '\t' << f << '\n';
    }
  };
  emit_group("group_a", lists.group_a);
  emit_group("group_b", lists.group_b);
}

namespace {

// Content-addressed stage cache. An artifact set is reused when the key and
// every output hash still match cache.json.
class StageRunner {
 public:
  StageRunner(std::filesystem::path out_dir, bool force)
      : out_dir_(std::move(out_dir)), force_(force) {
    const auto cache_path = out_dir_ / "cache.json";
    if (std::filesystem::exists(cache_path)) {
      std::ifstream in(cache_path);
      try {
        in >> cache_;
      } catch (const json::exception&) {
        cache_ = json::object();  // stale cache is just recomputed
      }
    } else {
      cache_ = json::object();
    }
  }

  // Runs fn unless every output is cache-valid for this key. Relative
  // output paths are resolved against out_dir.
  bool run(const std::string& stage, const std::string& key,
           const std::vector<std::filesystem::path>& outputs,
           const std::function<void()>& fn) {
    StageRecord record;
    record.name = stage;
    record.key = key;
    const auto t0 = std::chrono::steady_clock::now();
    bool hit = !force_ && cache_valid(stage, key, outputs);
    if (!hit) {
      try {
        fn();
      } catch (const std::exception& e) {
        throw Error("stage " + stage + ": " + e.what());
      }
    }
    record.cache_hit = hit;
    json entry;
    entry["key"] = key;
    json out_hashes = json::object();
    for (const auto& p : outputs) {
      const auto full = resolve(p);
      const auto h = hex64(hash_file(full));
      record.outputs.push_back(p.string());
      record.output_hashes.push_back(h);
      out_hashes[p.string()] = h;
    }
    entry["outputs"] = std::move(out_hashes);
    cache_[stage] = std::move(entry);
    record.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    records_.push_back(std::move(record));
    save_cache();  // keep completed stages resumable after a later failure
    return hit;
  }

  const std::vector<StageRecord>& records() const { return records_; }

 private:
  std::filesystem::path resolve(const std::filesystem::path& p) const {
    return p.is_absolute() ? p : out_dir_ / p;
  }

  bool cache_valid(const std::string& stage, const std::string& key,
                   const std::vector<std::filesystem::path>& outputs) const {
    if (!cache_.contains(stage)) return false;
    const auto& entry = cache_[stage];
    if (!entry.contains("key") || entry["key"] != key) return false;
    if (!entry.contains("outputs")) return false;
    for (const auto& p : outputs) {
      const auto full = resolve(p);
      if (!std::filesystem::exists(full)) return false;
      const auto it = entry["outputs"].find(p.string());
      if (it == entry["outputs"].end()) return false;
      if (it->get<std::string>() != hex64(hash_file(full))) return false;
    }
    return true;
  }

  void save_cache() const {
    const auto tmp = out_dir_ / "cache.json.tmp";
    std::ofstream out(tmp, std::ios::binary);
    out << cache_.dump(2) << '\n';
    out.close();
    std::filesystem::rename(tmp, out_dir_ / "cache.json");
  }

  std::filesystem::path out_dir_;
  bool force_;
  json cache_;
  std::vector<StageRecord> records_;
};

std::string bias_tsv_name(const std::string& metric, bool shuffled,
                          std::optional<std::uint64_t> seed = std::nullopt) {
  std::string name = shuffled ? "shuffled_bias_" : "bias_";
  name += metric;
  if (seed) name += "_seed_" + std::to_string(*seed);
  return name + ".tsv";
}

}  // namespace

RunManifest run_pipeline(const ExperimentConfig& cfg, bool force_recompute) {
  const auto wall0 = std::chrono::steady_clock::now();
  cfg.validate();
  std::filesystem::create_directories(cfg.out_dir);

  RunManifest manifest;
  manifest.tool_version = kToolVersion;
  manifest.config = cfg.to_json();

  std::string corpus_input_key;
  for (const auto& p : cfg.corpus_paths) {
    const auto h = hex64(hash_file(p));
    manifest.input_hashes[p.string()] = h;
    corpus_input_key += h + ";";
  }
  if (!cfg.pretrained_path.empty()) {
    manifest.input_hashes[cfg.pretrained_path.string()] =
        hex64(hash_file(cfg.pretrained_path));
  }

  StageRunner runner(cfg.out_dir, force_recompute);
  const auto out = [&](const std::string& name) { return cfg.out_dir / name; };

  // --- preprocess ---------------------------------------------------------
  {
    std::ostringstream key;
    key << "preprocess|" << corpus_input_key << "min_tokens="
        << cfg.preprocess.min_tokens
        << "|split=" << cfg.preprocess.split_sentences;
    runner.run("preprocess", hex64(fnv1a64(key.str())), {"corpus.txt"}, [&] {
      std::vector<TokenSentence> corpus;
      for (const auto& path : cfg.corpus_paths) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw IoError("cannot read corpus " + path.string());
        std::string line;
        while (std::getline(in, line)) {
          for (auto& s : preprocess_document(line, cfg.preprocess)) {
            corpus.push_back(std::move(s));
          }
        }
      }
      write_token_lines(out("corpus.txt"), corpus);
    });
  }
  const std::string corpus_hash = hex64(hash_file(out("corpus.txt")));

  // --- vocabulary ----------------------------------------------------------
  {
    std::ostringstream key;
    key << "vocab|" << corpus_hash << "|min_count=" << cfg.min_count;
    runner.run("vocab", hex64(fnv1a64(key.str())), {"vocab.tsv"}, [&] {
      const auto corpus = read_token_lines(out("corpus.txt"));
      build_vocabulary(corpus, cfg.min_count).save_tsv(out("vocab.tsv"));
    });
  }
  const std::string vocab_hash = hex64(hash_file(out("vocab.tsv")));

  const Vocabulary vocab = Vocabulary::load_tsv(out("vocab.tsv"));
  ContextWordLists lists = cfg.lists;
  lists.resolve(vocab);  // hard error before any heavy work

  const std::vector<TokenSentence> token_corpus =
      read_token_lines(out("corpus.txt"));
  const std::vector<Sentence> sentences = encode_corpus(token_corpus, vocab);

  // --- context word frequency report --------------------------------------
  {
    std::ostringstream key;
    key << "freq-report|" << vocab_hash;
    for (const auto& w : lists.group_a) key << '|' << w;
    for (const auto& w : lists.group_b) key << '|' << w;
    runner.run("freq-report", hex64(fnv1a64(key.str())),
               {"context_word_freqs.tsv"}, [&] {
                 std::ofstream fr(out("context_word_freqs.tsv"),
                                  std::ios::binary);
                 frequency_report(vocab, lists, fr);
               });
  }

  SgnsConfig sgns_cfg = cfg.sgns;
  sgns_cfg.threads = cfg.threads;
  GloveConfig glove_cfg = cfg.glove;
  glove_cfg.threads = cfg.threads;

  // Produces the unshuffled bias table for one metric, returns its path.
  auto run_metric_bias = [&](const std::string& metric) {
    const auto tsv = bias_tsv_name(metric, false);
    if (metric == "pmi") {
      std::ostringstream ckey;
      ckey << "cooc-pmi|" << corpus_hash << '|' << vocab_hash << "|w="
           << cfg.window << '|' << to_string(cfg.pmi_weighting);
      runner.run("cooc-pmi", hex64(fnv1a64(ckey.str())),
                 {"cooc_pmi.bin", "cooc_pmi.json"}, [&] {
                   count_cooccurrences(sentences, vocab.size(), cfg.window,
                                       cfg.pmi_weighting)
                       .save(out("cooc_pmi.bin"), out("cooc_pmi.json"));
                 });
      std::ostringstream bkey;
      bkey << "bias-pmi|" << hex64(hash_file(out("cooc_pmi.bin"))) << '|'
           << vocab_hash << "|eps=" << cfg.pmi.epsilon << "|log="
           << to_string(cfg.pmi.log_base) << "|inc="
           << cfg.include_context_words;
      for (const auto& w : lists.group_a) bkey << '|' << w;
      for (const auto& w : lists.group_b) bkey << '|' << w;
      runner.run("bias-pmi", hex64(fnv1a64(bkey.str())), {tsv}, [&] {
        const auto counts =
            CoocCounts::load(out("cooc_pmi.bin"), out("cooc_pmi.json"));
        save_bias_tsv(out(tsv), bias_table_pmi(counts, vocab, lists, cfg.pmi,
                                               cfg.include_context_words));
      });
    } else if (metric == "sgns") {
      std::ostringstream tkey;
      tkey << "train-sgns|" << corpus_hash << '|' << vocab_hash << "|dim="
           << sgns_cfg.dim << "|w=" << sgns_cfg.window << "|k="
           << sgns_cfg.negatives << "|e=" << sgns_cfg.epochs << "|lr="
           << sgns_cfg.step_size << "|sub=" << sgns_cfg.subsample << "|pow="
           << sgns_cfg.noise_exponent << "|seed=" << sgns_cfg.seed;
      runner.run("train-sgns", hex64(fnv1a64(tkey.str())),
                 {"vectors_sgns.txt"}, [&] {
                   save_embeddings(train_sgns(sentences, vocab, sgns_cfg),
                                   out("vectors_sgns.txt"),
                                   VectorFormat::glove_text);
                 });
      std::ostringstream bkey;
      bkey << "bias-sgns|" << hex64(hash_file(out("vectors_sgns.txt")))
           << "|inc=" << cfg.include_context_words;
      runner.run("bias-sgns", hex64(fnv1a64(bkey.str())), {tsv}, [&] {
        const auto emb = load_embeddings(out("vectors_sgns.txt"),
                                         VectorFormat::glove_text);
        save_bias_tsv(out(tsv), bias_table_we(emb, lists, &vocab,
                                              cfg.include_context_words));
      });
    } else if (metric == "glove") {
      std::ostringstream ckey;
      ckey << "cooc-glove|" << corpus_hash << '|' << vocab_hash << "|w="
           << cfg.window << '|' << to_string(cfg.glove_weighting);
      runner.run("cooc-glove", hex64(fnv1a64(ckey.str())),
                 {"cooc_glove.bin", "cooc_glove.json"}, [&] {
                   count_cooccurrences(sentences, vocab.size(), cfg.window,
                                       cfg.glove_weighting)
                       .save(out("cooc_glove.bin"), out("cooc_glove.json"));
                 });
      std::ostringstream tkey;
      tkey << "train-glove|" << hex64(hash_file(out("cooc_glove.bin")))
           << "|dim=" << glove_cfg.dim << "|it=" << glove_cfg.iterations
           << "|xmax=" << glove_cfg.x_max << "|a=" << glove_cfg.alpha
           << "|lr=" << glove_cfg.step_size << "|seed=" << glove_cfg.seed;
      runner.run("train-glove", hex64(fnv1a64(tkey.str())),
                 {"vectors_glove.txt"}, [&] {
                   const auto counts = CoocCounts::load(out("cooc_glove.bin"),
                                                        out("cooc_glove.json"));
                   save_embeddings(train_glove(counts, vocab, glove_cfg),
                                   out("vectors_glove.txt"),
                                   VectorFormat::glove_text);
                 });
      std::ostringstream bkey;
      bkey << "bias-glove|" << hex64(hash_file(out("vectors_glove.txt")))
           << "|inc=" << cfg.include_context_words;
      runner.run("bias-glove", hex64(fnv1a64(bkey.str())), {tsv}, [&] {
        const auto emb = load_embeddings(out("vectors_glove.txt"),
                                         VectorFormat::glove_text);
        save_bias_tsv(out(tsv), bias_table_we(emb, lists, &vocab,
                                              cfg.include_context_words));
      });
    } else {  // pretrained
      std::ostringstream bkey;
      bkey << "bias-pretrained|"
           << manifest.input_hashes[cfg.pretrained_path.string()] << "|inc="
           << cfg.include_context_words;
      for (const auto& w : lists.group_a) bkey << '|' << w;
      for (const auto& w : lists.group_b) bkey << '|' << w;
      runner.run("bias-pretrained", hex64(fnv1a64(bkey.str())), {tsv}, [&] {
        const auto emb =
            load_embeddings(cfg.pretrained_path, cfg.pretrained_format);
        save_bias_tsv(out(tsv), bias_table_we(emb, lists, nullptr,
                                              cfg.include_context_words));
      });
    }
    return tsv;
  };

  // Bias table -> binned report in all three formats.
  auto run_bins = [&](const std::string& metric, const std::string& tsv,
                      bool shuffled) {
    const std::string stem =
        std::string("bins_") + (shuffled ? "shuffled_" : "") + metric;
    BinScheme scheme = cfg.bins;
    if (metric == "pretrained" &&
        scheme.kind == BinScheme::Kind::log10_frequency) {
      scheme = BinScheme::default_rank();  // no raw frequencies available
    }
    std::ostringstream key;
    key << "bins|" << hex64(hash_file(out(tsv))) << "|kind="
        << (scheme.kind == BinScheme::Kind::log10_rank ? "rank" : "freq");
    for (double e : scheme.edges) key << ',' << e;
    runner.run(stem, hex64(fnv1a64(key.str())),
               {stem + ".csv", stem + ".json", stem + ".svg"}, [&] {
                 const BiasTable table = load_bias_tsv(out(tsv));
                 std::vector<double> bias, axis;
                 bias.reserve(table.entries.size());
                 axis.reserve(table.entries.size());
                 for (const auto& e : table.entries) {
                   bias.push_back(e.bias);
                   axis.push_back(e.axis);
                 }
                 const auto bins = assign_bins(axis, scheme);
                 const auto report = bin_stats(bias, bins, scheme);
                 emit_plot_data(report, ReportFormat::csv, out(stem + ".csv"));
                 emit_plot_data(report, ReportFormat::json,
                                out(stem + ".json"));
                 emit_plot_data(report, ReportFormat::svg, out(stem + ".svg"));
               });
  };

  for (const auto& metric : cfg.metrics) {
    const auto tsv = run_metric_bias(metric);
    run_bins(metric, tsv, false);
  }

  // --- shuffled control experiment -----------------------------------------
  if (cfg.shuffle) {
    ShuffledBiasConfig scfg;
    scfg.window = cfg.window;
    scfg.pmi_weighting = cfg.pmi_weighting;
    scfg.glove_weighting = cfg.glove_weighting;
    scfg.pmi = cfg.pmi;
    scfg.sgns = sgns_cfg;
    scfg.glove = glove_cfg;
    scfg.include_context_words = cfg.include_context_words;
    scfg.jobs = cfg.jobs;
    for (const auto& metric : cfg.metrics) {
      if (metric == "pretrained") continue;  // nothing to retrain
      scfg.metric = bias_metric_from_string(metric);
      std::ostringstream key;
      key << "shuffled-bias-" << metric << '|' << corpus_hash << '|'
          << vocab_hash << "|w=" << cfg.window << "|inc="
          << cfg.include_context_words;
      for (const auto s : cfg.shuffle->seeds) key << "|s=" << s;
      if (metric == "pmi") {
        key << "|eps=" << cfg.pmi.epsilon << '|'
            << to_string(cfg.pmi_weighting);
      } else if (metric == "sgns") {
        key << "|dim=" << sgns_cfg.dim << "|e=" << sgns_cfg.epochs
            << "|seed=" << sgns_cfg.seed;
      } else {
        key << "|dim=" << glove_cfg.dim << "|it=" << glove_cfg.iterations
            << '|' << to_string(cfg.glove_weighting)
            << "|seed=" << glove_cfg.seed;
      }
      std::vector<std::filesystem::path> outputs;
      for (const auto s : cfg.shuffle->seeds) {
        outputs.emplace_back(bias_tsv_name(metric, true, s));
      }
      outputs.emplace_back(bias_tsv_name(metric, true));
      runner.run("shuffled-bias-" + metric, hex64(fnv1a64(key.str())),
                 outputs, [&] {
                   std::vector<BiasTable> per_seed;
                   const BiasTable averaged = averaged_shuffled_bias(
                       sentences, vocab, lists, *cfg.shuffle, scfg, &per_seed);
                   for (std::size_t k = 0; k < per_seed.size(); ++k) {
                     save_bias_tsv(out(bias_tsv_name(metric, true,
                                                     cfg.shuffle->seeds[k])),
                                   per_seed[k]);
                   }
                   save_bias_tsv(out(bias_tsv_name(metric, true)), averaged);
                 });
      run_bins(metric, bias_tsv_name(metric, true), true);
    }
  }

  manifest.stages = runner.records();
  manifest.total_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0)
          .count();
  manifest.save(cfg.out_dir / "manifest.json");
  return manifest;
}

}  // namespace corpusbias
