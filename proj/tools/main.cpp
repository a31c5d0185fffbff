#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "corpusbias/corpus.hpp"
#include "corpusbias/error.hpp"
#include "corpusbias/glove.hpp"
#include "corpusbias/hash.hpp"
#include "corpusbias/pipeline.hpp"
#include "corpusbias/pmi.hpp"
#include "corpusbias/report_io.hpp"
#include "corpusbias/sgns.hpp"
#include "corpusbias/shuffle.hpp"
#include "corpusbias/stats.hpp"
#include "corpusbias/we_bias.hpp"
#include "json.hpp"

namespace cb = corpusbias;

namespace {

cb::BinScheme scheme_from_flags(const std::string& kind,
                                const std::vector<double>& edges) {
  cb::BinScheme scheme = kind == "log10_rank" ? cb::BinScheme::default_rank()
                                              : cb::BinScheme::default_frequency();
  if (!edges.empty()) scheme.edges = edges;
  scheme.validate();
  return scheme;
}

cb::BinReport report_from_bias_tsv(const std::filesystem::path& bias_path,
                                   const cb::BinScheme& scheme) {
  const cb::BiasTable table = cb::load_bias_tsv(bias_path);
  std::vector<double> bias, axis;
  bias.reserve(table.entries.size());
  axis.reserve(table.entries.size());
  for (const auto& e : table.entries) {
    bias.push_back(e.bias);
    axis.push_back(e.axis);
  }
  return cb::bin_stats(bias, cb::assign_bins(axis, scheme), scheme);
}

void write_train_manifest(const std::filesystem::path& path,
                          const nlohmann::json& params) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw cb::IoError("cannot write manifest " + path.string());
  out << params.dump(2) << '\n';
}

void report_skipped(const cb::BiasTable& table) {
  if (table.skipped.empty()) return;
  std::cerr << table.skipped.size() << " word(s) skipped:\n";
  for (const auto& s : table.skipped) std::cerr << "  " << s << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Corpus gender-bias audit toolkit"};
  app.set_version_flag("--version", cb::kToolVersion);
  app.require_subcommand(1);

  // ---- preprocess ----------------------------------------------------------
  auto* sc_pre = app.add_subcommand(
      "preprocess", "Clean raw documents into one tokenized sentence per line");
  std::vector<std::string> pre_inputs;
  std::string pre_output;
  std::size_t pre_min_tokens = 50;
  bool pre_no_split = false;
  sc_pre->add_option("--input", pre_inputs, "Raw text, one document per line")
      ->required();
  sc_pre->add_option("--output", pre_output, "Preprocessed corpus")->required();
  sc_pre->add_option("--min-tokens", pre_min_tokens,
                     "Drop documents with fewer tokens");
  sc_pre->add_flag("--no-sentence-split", pre_no_split,
                   "Treat each input line as a single sentence");

  // ---- vocab ---------------------------------------------------------------
  auto* sc_vocab =
      app.add_subcommand("vocab", "Build the frequency-filtered vocabulary");
  std::string vocab_corpus, vocab_output;
  std::uint64_t vocab_min_count = 100;
  sc_vocab->add_option("--corpus", vocab_corpus, "Preprocessed corpus")
      ->required();
  sc_vocab->add_option("--output", vocab_output, "Vocabulary TSV")->required();
  sc_vocab->add_option("--min-count", vocab_min_count,
                       "Minimum corpus frequency");

  // ---- cooc ----------------------------------------------------------------
  auto* sc_cooc = app.add_subcommand(
      "cooc", "Count windowed co-occurrences over a preprocessed corpus");
  std::string cooc_corpus, cooc_vocab, cooc_output, cooc_sidecar;
  int cooc_window = 10;
  std::string cooc_weighting = "flat";
  bool cooc_text = false;
  sc_cooc->add_option("--corpus", cooc_corpus, "Preprocessed corpus")
      ->required();
  sc_cooc->add_option("--vocab", cooc_vocab, "Vocabulary TSV")->required();
  sc_cooc->add_option("--output", cooc_output, "Binary counts file")
      ->required();
  sc_cooc->add_option("--sidecar", cooc_sidecar,
                      "JSON sidecar (default: <output>.json)");
  sc_cooc->add_option("--window", cooc_window, "Window size");
  sc_cooc->add_option("--weighting", cooc_weighting, "flat|harmonic");
  sc_cooc->add_flag("--text", cooc_text, "Also dump `i j count` lines to stdout");

  // ---- pmi-bias -------------------------------------------------------------
  auto* sc_pmi = app.add_subcommand(
      "pmi-bias", "Per-word PMI gender bias from co-occurrence counts");
  std::string pmi_cooc, pmi_sidecar, pmi_vocab, pmi_words, pmi_output;
  double pmi_epsilon = 0.01;
  std::string pmi_log_base = "natural";
  bool pmi_include = false;
  sc_pmi->add_option("--cooc", pmi_cooc, "Binary counts file")->required();
  sc_pmi->add_option("--sidecar", pmi_sidecar,
                     "JSON sidecar (default: <cooc>.json)");
  sc_pmi->add_option("--vocab", pmi_vocab, "Vocabulary TSV")->required();
  sc_pmi->add_option("--context-words", pmi_words,
                     "JSON with group_a/group_b")
      ->required();
  sc_pmi->add_option("--output", pmi_output, "Bias TSV")->required();
  sc_pmi->add_option("--epsilon", pmi_epsilon, "Smoothing constant");
  sc_pmi->add_option("--log-base", pmi_log_base, "natural|base2|base10");
  sc_pmi->add_flag("--include-context-words", pmi_include,
                   "Score the context words themselves too");

  // ---- train-sgns ------------------------------------------------------------
  auto* sc_sgns = app.add_subcommand(
      "train-sgns", "Train skip-gram negative-sampling vectors from scratch");
  std::string sgns_corpus, sgns_vocab, sgns_output, sgns_manifest;
  cb::SgnsConfig sgns_cfg;
  sc_sgns->add_option("--corpus", sgns_corpus, "Preprocessed corpus")
      ->required();
  sc_sgns->add_option("--vocab", sgns_vocab, "Vocabulary TSV")->required();
  sc_sgns->add_option("--output", sgns_output, "glove_text vectors")
      ->required();
  sc_sgns->add_option("--manifest", sgns_manifest,
                      "Run manifest JSON (default: <output>.manifest.json)");
  sc_sgns->add_option("--dim", sgns_cfg.dim, "Vector dimension");
  sc_sgns->add_option("--window", sgns_cfg.window, "Maximum window");
  sc_sgns->add_option("--negatives", sgns_cfg.negatives, "Noise words per pair");
  sc_sgns->add_option("--epochs", sgns_cfg.epochs, "Training epochs");
  sc_sgns->add_option("--step-size", sgns_cfg.step_size, "Initial step size");
  sc_sgns->add_option("--subsample", sgns_cfg.subsample,
                      "Frequency subsampling threshold (0 disables)");
  sc_sgns->add_option("--noise-exponent", sgns_cfg.noise_exponent,
                      "Unigram distortion exponent");
  sc_sgns->add_option("--seed", sgns_cfg.seed, "RNG seed");
  sc_sgns->add_option("--threads", sgns_cfg.threads, "Worker threads");

  // ---- train-glove -----------------------------------------------------------
  auto* sc_glove = app.add_subcommand(
      "train-glove", "Train GloVe vectors from co-occurrence counts");
  std::string glove_cooc, glove_sidecar, glove_vocab, glove_output,
      glove_manifest;
  cb::GloveConfig glove_cfg;
  sc_glove->add_option("--cooc", glove_cooc, "Binary counts file")->required();
  sc_glove->add_option("--sidecar", glove_sidecar,
                       "JSON sidecar (default: <cooc>.json)");
  sc_glove->add_option("--vocab", glove_vocab, "Vocabulary TSV")->required();
  sc_glove->add_option("--output", glove_output, "glove_text vectors")
      ->required();
  sc_glove->add_option("--manifest", glove_manifest,
                       "Run manifest JSON (default: <output>.manifest.json)");
  sc_glove->add_option("--dim", glove_cfg.dim, "Vector dimension");
  sc_glove->add_option("--iterations", glove_cfg.iterations, "AdaGrad passes");
  sc_glove->add_option("--x-max", glove_cfg.x_max, "Weighting-function knee");
  sc_glove->add_option("--alpha", glove_cfg.alpha,
                       "Weighting-function exponent");
  sc_glove->add_option("--step-size", glove_cfg.step_size, "AdaGrad step size");
  sc_glove->add_option("--seed", glove_cfg.seed, "RNG seed");
  sc_glove->add_option("--threads", glove_cfg.threads, "Worker threads");

  // ---- we-bias ---------------------------------------------------------------
  auto* sc_we = app.add_subcommand(
      "we-bias", "Per-word embedding-cosine gender bias from a vector file");
  std::string we_vectors, we_format = "glove_text", we_words, we_vocab,
              we_output;
  bool we_include = false;
  sc_we->add_option("--vectors", we_vectors, "Vector file")->required();
  sc_we->add_option("--format", we_format, "glove_text|w2v_text|w2v_binary");
  sc_we->add_option("--context-words", we_words, "JSON with group_a/group_b")
      ->required();
  sc_we->add_option("--vocab", we_vocab,
                    "Vocabulary TSV; adds corpus frequencies (otherwise the "
                    "axis is the file rank)");
  sc_we->add_option("--output", we_output, "Bias TSV")->required();
  sc_we->add_flag("--include-context-words", we_include,
                  "Score the context words themselves too");

  // ---- shuffle ---------------------------------------------------------------
  auto* sc_shuffle = app.add_subcommand(
      "shuffle", "Globally permute all corpus tokens (seeded)");
  std::string shuffle_corpus_path, shuffle_output;
  std::uint64_t shuffle_seed = 1;
  sc_shuffle->add_option("--corpus", shuffle_corpus_path,
                         "Preprocessed corpus")
      ->required();
  sc_shuffle->add_option("--output", shuffle_output, "Shuffled corpus")
      ->required();
  sc_shuffle->add_option("--seed", shuffle_seed, "Permutation seed");

  // ---- shuffled-bias ----------------------------------------------------------
  auto* sc_sb = app.add_subcommand(
      "shuffled-bias",
      "Average per-word bias over independently shuffled corpus copies");
  std::string sb_corpus, sb_vocab, sb_words, sb_output, sb_metric = "pmi";
  std::string sb_per_seed_dir;
  std::vector<std::uint64_t> sb_seeds;
  int sb_window = 10, sb_jobs = 1;
  std::string sb_weighting = "flat";
  double sb_epsilon = 0.01;
  cb::SgnsConfig sb_sgns;
  cb::GloveConfig sb_glove;
  bool sb_include = false;
  sc_sb->add_option("--corpus", sb_corpus, "Preprocessed corpus")->required();
  sc_sb->add_option("--vocab", sb_vocab, "Vocabulary TSV")->required();
  sc_sb->add_option("--context-words", sb_words, "JSON with group_a/group_b")
      ->required();
  sc_sb->add_option("--output", sb_output, "Averaged bias TSV")->required();
  sc_sb->add_option("--metric", sb_metric, "pmi|sgns|glove");
  sc_sb->add_option("--seeds", sb_seeds, "Shuffle seeds (default 5 from 1001)");
  sc_sb->add_option("--per-seed-dir", sb_per_seed_dir,
                    "Directory for per-seed bias TSVs");
  sc_sb->add_option("--window", sb_window, "Co-occurrence window");
  sc_sb->add_option("--weighting", sb_weighting, "PMI counting weighting");
  sc_sb->add_option("--epsilon", sb_epsilon, "PMI smoothing constant");
  sc_sb->add_option("--dim", sb_sgns.dim, "SGNS/GloVe vector dimension");
  sc_sb->add_option("--epochs", sb_sgns.epochs, "SGNS epochs");
  sc_sb->add_option("--iterations", sb_glove.iterations, "GloVe iterations");
  sc_sb->add_option("--seed", sb_sgns.seed, "Trainer seed");
  sc_sb->add_option("--threads", sb_sgns.threads, "Trainer threads");
  sc_sb->add_option("--jobs", sb_jobs, "Parallel shuffle-seed jobs");
  sc_sb->add_flag("--include-context-words", sb_include,
                  "Score the context words themselves too");

  // ---- bins -----------------------------------------------------------------
  auto* sc_bins = app.add_subcommand(
      "bins", "Per-frequency-bin distribution report (CSV) from a bias TSV");
  std::string bins_bias, bins_output, bins_kind = "log10_frequency";
  std::vector<double> bins_edges;
  sc_bins->add_option("--bias", bins_bias, "Bias TSV")->required();
  sc_bins->add_option("--output", bins_output, "Report CSV")->required();
  sc_bins->add_option("--kind", bins_kind, "log10_frequency|log10_rank");
  sc_bins->add_option("--edges", bins_edges,
                      "Bin edges in log10 space (ascending)");

  // ---- report ----------------------------------------------------------------
  auto* sc_report = app.add_subcommand(
      "report", "Emit CSV + JSON + SVG plot data from a bias TSV");
  std::string report_bias, report_stem, report_kind = "log10_frequency";
  std::vector<double> report_edges;
  sc_report->add_option("--bias", report_bias, "Bias TSV")->required();
  sc_report->add_option("--out-stem", report_stem,
                        "Output stem, writes <stem>.{csv,json,svg}")
      ->required();
  sc_report->add_option("--kind", report_kind, "log10_frequency|log10_rank");
  sc_report->add_option("--edges", report_edges,
                        "Bin edges in log10 space (ascending)");

  // ---- run -------------------------------------------------------------------
  auto* sc_run = app.add_subcommand(
      "run", "Execute a whole experiment from one JSON config");
  std::string run_config, run_out_dir;
  std::uint64_t run_seed = 0;
  int run_threads = 0;
  bool run_force = false;
  bool run_seed_set = false, run_threads_set = false;
  sc_run->add_option("--config", run_config, "Experiment config JSON")
      ->required();
  sc_run->add_option("--out-dir", run_out_dir, "Override config out_dir");
  sc_run->add_option("--seed", run_seed, "Override config seed")
      ->trigger_on_parse()
      ->each([&](const std::string&) { run_seed_set = true; });
  sc_run->add_option("--threads", run_threads, "Override config threads")
      ->trigger_on_parse()
      ->each([&](const std::string&) { run_threads_set = true; });
  sc_run->add_flag("--force", run_force, "Ignore cached stage outputs");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sc_pre) {
      cb::PreprocessOptions opts;
      opts.min_tokens = pre_min_tokens;
      opts.split_sentences = !pre_no_split;
      std::vector<cb::TokenSentence> corpus;
      for (const auto& input : pre_inputs) {
        std::ifstream in(input, std::ios::binary);
        if (!in) throw cb::IoError("cannot read " + input);
        std::string line;
        while (std::getline(in, line)) {
          for (auto& s : cb::preprocess_document(line, opts)) {
            corpus.push_back(std::move(s));
          }
        }
      }
      cb::write_token_lines(pre_output, corpus);
    } else if (*sc_vocab) {
      cb::build_vocabulary(cb::read_token_lines(vocab_corpus), vocab_min_count)
          .save_tsv(vocab_output);
    } else if (*sc_cooc) {
      const auto vocab = cb::Vocabulary::load_tsv(cooc_vocab);
      const auto sentences =
          cb::encode_corpus(cb::read_token_lines(cooc_corpus), vocab);
      const auto counts = cb::count_cooccurrences(
          sentences, vocab.size(), cooc_window,
          cb::weighting_from_string(cooc_weighting));
      counts.save(cooc_output, cooc_sidecar.empty() ? cooc_output + ".json"
                                                    : cooc_sidecar);
      if (cooc_text) counts.write_text(std::cout);
    } else if (*sc_pmi) {
      const auto counts = cb::CoocCounts::load(
          pmi_cooc, pmi_sidecar.empty() ? pmi_cooc + ".json" : pmi_sidecar);
      const auto vocab = cb::Vocabulary::load_tsv(pmi_vocab);
      auto lists = cb::ContextWordLists::load_json(pmi_words);
      lists.resolve(vocab);
      cb::PmiConfig pcfg;
      pcfg.epsilon = pmi_epsilon;
      pcfg.log_base = cb::log_base_from_string(pmi_log_base);
      const auto table =
          cb::bias_table_pmi(counts, vocab, lists, pcfg, pmi_include);
      cb::save_bias_tsv(pmi_output, table);
      report_skipped(table);
    } else if (*sc_sgns) {
      const auto vocab = cb::Vocabulary::load_tsv(sgns_vocab);
      const auto sentences =
          cb::encode_corpus(cb::read_token_lines(sgns_corpus), vocab);
      const auto emb = cb::train_sgns(sentences, vocab, sgns_cfg);
      cb::save_embeddings(emb, sgns_output, cb::VectorFormat::glove_text);
      write_train_manifest(
          sgns_manifest.empty() ? sgns_output + ".manifest.json"
                                : sgns_manifest,
          {{"method", "sgns"},
           {"dim", sgns_cfg.dim},
           {"window", sgns_cfg.window},
           {"negatives", sgns_cfg.negatives},
           {"epochs", sgns_cfg.epochs},
           {"step_size", sgns_cfg.step_size},
           {"subsample", sgns_cfg.subsample},
           {"noise_exponent", sgns_cfg.noise_exponent},
           {"seed", sgns_cfg.seed},
           {"threads", sgns_cfg.threads},
           {"corpus", sgns_corpus},
           {"corpus_hash", cb::hex64(cb::hash_file(sgns_corpus))},
           {"vocab_hash", cb::hex64(cb::hash_file(sgns_vocab))},
           {"tool_version", cb::kToolVersion}});
    } else if (*sc_glove) {
      const auto vocab = cb::Vocabulary::load_tsv(glove_vocab);
      const auto counts = cb::CoocCounts::load(
          glove_cooc,
          glove_sidecar.empty() ? glove_cooc + ".json" : glove_sidecar);
      const auto emb = cb::train_glove(counts, vocab, glove_cfg);
      cb::save_embeddings(emb, glove_output, cb::VectorFormat::glove_text);
      write_train_manifest(
          glove_manifest.empty() ? glove_output + ".manifest.json"
                                 : glove_manifest,
          {{"method", "glove"},
           {"dim", glove_cfg.dim},
           {"iterations", glove_cfg.iterations},
           {"x_max", glove_cfg.x_max},
           {"alpha", glove_cfg.alpha},
           {"step_size", glove_cfg.step_size},
           {"seed", glove_cfg.seed},
           {"threads", glove_cfg.threads},
           {"cooc_hash", cb::hex64(cb::hash_file(glove_cooc))},
           {"vocab_hash", cb::hex64(cb::hash_file(glove_vocab))},
           {"tool_version", cb::kToolVersion}});
    } else if (*sc_we) {
      const auto emb = cb::load_embeddings(
          we_vectors, cb::vector_format_from_string(we_format));
      auto lists = cb::ContextWordLists::load_json(we_words);
      std::optional<cb::Vocabulary> vocab;
      if (!we_vocab.empty()) vocab = cb::Vocabulary::load_tsv(we_vocab);
      const auto table = cb::bias_table_we(
          emb, lists, vocab ? &*vocab : nullptr, we_include);
      cb::save_bias_tsv(we_output, table);
      report_skipped(table);
    } else if (*sc_shuffle) {
      auto corpus = cb::read_token_lines(shuffle_corpus_path);
      cb::shuffle_token_corpus(corpus, shuffle_seed);
      cb::write_token_lines(shuffle_output, corpus);
    } else if (*sc_sb) {
      const auto vocab = cb::Vocabulary::load_tsv(sb_vocab);
      const auto sentences =
          cb::encode_corpus(cb::read_token_lines(sb_corpus), vocab);
      auto lists = cb::ContextWordLists::load_json(sb_words);
      lists.resolve(vocab);
      cb::ShufflePlan plan = sb_seeds.empty()
                                 ? cb::ShufflePlan::consecutive(1001, 5)
                                 : cb::ShufflePlan{sb_seeds};
      cb::ShuffledBiasConfig scfg;
      scfg.metric = cb::bias_metric_from_string(sb_metric);
      scfg.window = sb_window;
      scfg.pmi_weighting = cb::weighting_from_string(sb_weighting);
      scfg.pmi.epsilon = sb_epsilon;
      sb_glove.dim = sb_sgns.dim;
      sb_glove.seed = sb_sgns.seed;
      sb_glove.threads = sb_sgns.threads;
      scfg.sgns = sb_sgns;
      scfg.glove = sb_glove;
      scfg.include_context_words = sb_include;
      scfg.jobs = sb_jobs;
      std::vector<cb::BiasTable> per_seed;
      const auto averaged = cb::averaged_shuffled_bias(
          sentences, vocab, lists, plan, scfg, &per_seed);
      if (!sb_per_seed_dir.empty()) {
        std::filesystem::create_directories(sb_per_seed_dir);
        for (std::size_t k = 0; k < per_seed.size(); ++k) {
          cb::save_bias_tsv(std::filesystem::path(sb_per_seed_dir) /
                                ("bias_seed_" + std::to_string(plan.seeds[k]) +
                                 ".tsv"),
                            per_seed[k]);
        }
      }
      cb::save_bias_tsv(sb_output, averaged);
      report_skipped(averaged);
    } else if (*sc_bins) {
      const auto report = report_from_bias_tsv(
          bins_bias, scheme_from_flags(bins_kind, bins_edges));
      cb::emit_plot_data(report, cb::ReportFormat::csv, bins_output);
    } else if (*sc_report) {
      const auto report = report_from_bias_tsv(
          report_bias, scheme_from_flags(report_kind, report_edges));
      cb::emit_plot_data(report, cb::ReportFormat::csv, report_stem + ".csv");
      cb::emit_plot_data(report, cb::ReportFormat::json, report_stem + ".json");
      cb::emit_plot_data(report, cb::ReportFormat::svg, report_stem + ".svg");
    } else if (*sc_run) {
      auto cfg = cb::ExperimentConfig::load(run_config);
      if (!run_out_dir.empty()) cfg.out_dir = run_out_dir;
      if (run_seed_set) {
        cfg.seed = run_seed;
        cfg.sgns.seed = run_seed;
        cfg.glove.seed = run_seed;
      }
      if (run_threads_set) cfg.threads = run_threads;
      const auto manifest = cb::run_pipeline(cfg, run_force);
      std::size_t hits = 0;
      for (const auto& s : manifest.stages) hits += s.cache_hit ? 1 : 0;
      std::cout << "completed " << manifest.stages.size() << " stage(s), "
                << hits << " cache hit(s); manifest at "
                << (cfg.out_dir / "manifest.json").string() << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
