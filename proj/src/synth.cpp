#include "corpusbias/synth.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "corpusbias/error.hpp"
#include "corpusbias/rng.hpp"
#include "corpusbias/sgns.hpp"

namespace corpusbias {

namespace {

constexpr std::array<const char*, 8> kFemale = {
    "female", "woman", "girl", "sister", "she", "her", "hers", "daughter"};
constexpr std::array<const char*, 8> kMale = {"male", "man",  "boy", "brother",
                                              "he",   "him", "his", "son"};

// Natural relative shares (fractions of all tokens), roughly the ratios
// seen in large English corpora. Female forms total ~0.5%, male ~1.5%.
constexpr std::array<double, 8> kFemaleShare = {1.66e-4, 1.39e-4, 8.3e-5,
                                                1.06e-4, 2.07e-3, 2.19e-3,
                                                3.4e-6,  1.73e-4};
constexpr std::array<double, 8> kMaleShare = {1.06e-4, 2.6e-4,  7.3e-5,
                                              1.7e-4,  6.9e-3,  1.06e-3,
                                              5.6e-3,  3.2e-4};

const std::array<const char*, 65> kSyllables = {
    "ba", "be", "bi", "bo", "bu", "da", "de", "di", "do", "du", "ga", "ge",
    "gi", "go", "gu", "ka", "ke", "ki", "ko", "ku", "la", "le", "li", "lo",
    "lu", "ma", "me", "mi", "mo", "mu", "na", "ne", "ni", "no", "nu", "pa",
    "pe", "pi", "po", "pu", "ra", "re", "ri", "ro", "ru", "sa", "se", "si",
    "so", "su", "ta", "te", "ti", "to", "tu", "va", "ve", "vi", "vo", "vu",
    "za", "ze", "zi", "zo", "zu"};

std::string content_word(std::size_t i) {
  std::string w = kSyllables[i % 65];
  w += kSyllables[(i / 65) % 65];
  w += kSyllables[(i / (65 * 65)) % 65];
  return w;
}

std::string function_word(std::size_t i) {
  std::string w = kSyllables[i % 65];
  w += kSyllables[(i / 65) % 65];
  return w;
}

enum Topic { kNeutral = 0, kFemaleTopic = 1, kMaleTopic = 2 };

}  // namespace

void write_synth_corpus(const std::filesystem::path& path,
                        const SynthConfig& cfg) {
  if (cfg.tokens == 0) throw ConfigError("token budget must be positive");
  if (cfg.content_types < 1000) {
    throw ConfigError("need >= 1000 content types");
  }

  std::vector<std::string> words;
  std::vector<double> share;
  std::vector<int> tilt;  // home topic per word, kNeutral = none

  // Three very frequent neutral words ("the"/"of"/"and" analogues).
  for (const auto& [w, s] : {std::pair{"zax", 0.030}, {"vex", 0.022},
                             {"mup", 0.016}}) {
    words.emplace_back(w);
    share.push_back(s);
    tilt.push_back(kNeutral);
  }
  // Function-word head: 160 types, shares log-uniform over
  // [10^4.2, 10^5] / 2e7, i.e. ~37% of all tokens.
  const double head_lo = std::log(7.925e-4);
  const double head_hi = std::log(5.0e-3);
  for (std::size_t i = 0; i < 160; ++i) {
    words.push_back(function_word(i));
    const double u = static_cast<double>(i) / 159.0;
    share.push_back(std::exp(head_lo + u * (head_hi - head_lo)));
    tilt.push_back(kNeutral);
  }
  // Gendered context words; floored so they survive min-count filtering.
  for (std::size_t i = 0; i < 8; ++i) {
    words.emplace_back(kFemale[i]);
    share.push_back(std::max(1.5 * kFemaleShare[i], cfg.gender_floor));
    tilt.push_back(kFemaleTopic);
  }
  for (std::size_t i = 0; i < 8; ++i) {
    words.emplace_back(kMale[i]);
    share.push_back(std::max(kMaleShare[i], cfg.gender_floor));
    tilt.push_back(kMaleTopic);
  }

  double used = 0.0;
  for (double s : share) used += s;
  if (used >= 0.95) throw ConfigError("gender floor leaves no content mass");

  // Zipf content tail over the remaining mass. A slice of types carries
  // digit forms, and 30% each lean female/male to give the unshuffled
  // corpus real gendered co-occurrence structure.
  double harmonic = 0.0;
  for (std::size_t r = 1; r <= cfg.content_types; ++r) {
    harmonic += 1.0 / static_cast<double>(r);
  }
  const double content_mass = 1.0 - used;
  for (std::size_t i = 0; i < cfg.content_types; ++i) {
    if (i >= 200 && i < 230) {
      words.push_back(std::to_string(1941 + (i - 200)));
    } else {
      words.push_back(content_word(i));
    }
    share.push_back(content_mass / (harmonic * static_cast<double>(i + 1)));
    switch (i % 10) {
      case 0:
      case 3:
      case 6:
        tilt.push_back(kFemaleTopic);
        break;
      case 1:
      case 4:
      case 7:
        tilt.push_back(kMaleTopic);
        break;
      default:
        tilt.push_back(kNeutral);
    }
  }

  // Per-topic sampling tables. A word's share is boosted in its home topic
  // and damped in the opposite gendered topic.
  std::array<std::vector<double>, 3> topic_weights;
  for (auto& tw : topic_weights) tw.resize(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) {
    for (int t = 0; t < 3; ++t) {
      double m = 1.0;
      if (tilt[i] != kNeutral) {
        if (t == tilt[i]) {
          m = i < 179 ? 5.0 : 2.5;  // gendered words tilt harder
        } else if (t != kNeutral) {
          m = 0.35;
        }
      }
      topic_weights[t][i] = share[i] * m;
    }
  }
  std::array<NoiseTable, 3> samplers = {NoiseTable(topic_weights[0]),
                                        NoiseTable(topic_weights[1]),
                                        NoiseTable(topic_weights[2])};

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write corpus file " + path.string());

  Rng rng(cfg.seed);
  std::uint64_t emitted = 0;
  std::string line;
  while (emitted < cfg.tokens) {
    line.clear();
    // ~2% of documents fall under the 50-token article filter.
    const bool tiny = rng.unit() < 0.02;
    const std::size_t n_sentences = tiny ? 1 : 4 + rng.below(4);
    const double tz = rng.unit();
    const int topic = tz < 0.50 ? kNeutral : (tz < 0.72 ? kFemaleTopic
                                                        : kMaleTopic);
    for (std::size_t s = 0; s < n_sentences; ++s) {
      const std::size_t len = tiny ? 5 + rng.below(10) : 14 + rng.below(12);
      for (std::size_t k = 0; k < len; ++k) {
        std::string tok = words[samplers[topic].sample(rng)];
        if (k == 0 && tok[0] >= 'a' && tok[0] <= 'z') {
          tok[0] = static_cast<char>(tok[0] - 'a' + 'A');
        }
        if (k > 0) line += ' ';
        line += tok;
        if (k + 1 < len && rng.unit() < 0.06) line += ',';
        ++emitted;
      }
      const double pu = rng.unit();
      line += pu < 0.90 ? "." : (pu < 0.95 ? "!" : "?");
      if (s + 1 < n_sentences) line += ' ';
    }
    if (rng.unit() < 0.015) line += " \xe2\x80\x94";  // em dash
    line += '\n';
    out << line;
  }
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace corpusbias
