#include <iostream>

#include "CLI11.hpp"

#include "corpusbias/synth.hpp"

// Deterministic synthetic corpus generator. The repo ships no natural
// corpus, so demos and scale tests synthesize one with realistic frequency
// structure (see corpusbias/synth.hpp).
int main(int argc, char** argv) {
  CLI::App app{"Generate a synthetic demo corpus"};
  corpusbias::SynthConfig cfg;
  std::string output;
  app.add_option("--output", output, "Raw corpus file, one document per line")
      ->required();
  app.add_option("--tokens", cfg.tokens, "Approximate token budget");
  app.add_option("--seed", cfg.seed, "RNG seed");
  app.add_option("--content-types", cfg.content_types,
                 "Zipf tail vocabulary size");
  app.add_option("--gender-floor", cfg.gender_floor,
                 "Minimum share per gendered context word");
  CLI11_PARSE(app, argc, argv);

  try {
    corpusbias::write_synth_corpus(output, cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
