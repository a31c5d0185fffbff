#include "corpusbias/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "corpusbias/error.hpp"
#include "json.hpp"

namespace corpusbias {

namespace {

bool is_ascii_alnum(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
         (c >= 'A' && c <= 'Z');
}

char ascii_lower(unsigned char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a')
                                : static_cast<char>(c);
}

// Returns the length of the valid UTF-8 sequence starting at s[i], or 0.
std::size_t utf8_sequence_length(std::string_view s, std::size_t i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) return 1;
  auto cont = [&](std::size_t k, unsigned char lo, unsigned char hi) {
    if (i + k >= s.size()) return false;
    const auto b = static_cast<unsigned char>(s[i + k]);
    return b >= lo && b <= hi;
  };
  if (b0 >= 0xc2 && b0 <= 0xdf) return cont(1, 0x80, 0xbf) ? 2 : 0;
  if (b0 == 0xe0) return cont(1, 0xa0, 0xbf) && cont(2, 0x80, 0xbf) ? 3 : 0;
  if (b0 >= 0xe1 && b0 <= 0xec)
    return cont(1, 0x80, 0xbf) && cont(2, 0x80, 0xbf) ? 3 : 0;
  if (b0 == 0xed) return cont(1, 0x80, 0x9f) && cont(2, 0x80, 0xbf) ? 3 : 0;
  if (b0 >= 0xee && b0 <= 0xef)
    return cont(1, 0x80, 0xbf) && cont(2, 0x80, 0xbf) ? 3 : 0;
  if (b0 == 0xf0)
    return cont(1, 0x90, 0xbf) && cont(2, 0x80, 0xbf) && cont(3, 0x80, 0xbf)
               ? 4
               : 0;
  if (b0 >= 0xf1 && b0 <= 0xf3)
    return cont(1, 0x80, 0xbf) && cont(2, 0x80, 0xbf) && cont(3, 0x80, 0xbf)
               ? 4
               : 0;
  if (b0 == 0xf4)
    return cont(1, 0x80, 0x8f) && cont(2, 0x80, 0xbf) && cont(3, 0x80, 0xbf)
               ? 4
               : 0;
  return 0;
}

bool valid_context_word(const std::string& w) {
  if (w.empty()) return false;
  for (unsigned char c : w) {
    if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'z'))) return false;
  }
  return true;
}

}  // namespace

std::vector<TokenSentence> preprocess_document(std::string_view raw,
                                               const PreprocessOptions& opts) {
  std::vector<TokenSentence> sentences;
  TokenSentence current;
  std::string token;
  std::size_t total_tokens = 0;

  auto flush_token = [&] {
    if (!token.empty()) {
      current.push_back(std::move(token));
      token.clear();
      ++total_tokens;
    }
  };
  auto flush_sentence = [&] {
    flush_token();
    if (!current.empty()) sentences.push_back(std::move(current));
    current.clear();
  };

  std::size_t i = 0;
  while (i < raw.size()) {
    const auto c = static_cast<unsigned char>(raw[i]);
    if (c < 0x80) {
      if (is_ascii_alnum(c)) {
        token.push_back(ascii_lower(c));
      } else if (opts.split_sentences && (c == '.' || c == '!' || c == '?')) {
        flush_sentence();
      } else {
        flush_token();
      }
      ++i;
    } else {
      const std::size_t len = utf8_sequence_length(raw, i);
      if (len == 0) {
        throw ParseError("invalid UTF-8 at byte offset " + std::to_string(i));
      }
      // Non-ASCII code points act as token separators.
      flush_token();
      i += len;
    }
  }
  flush_sentence();

  if (total_tokens < opts.min_tokens) return {};
  return sentences;
}

std::optional<WordId> Vocabulary::find(std::string_view word) const {
  auto it = index_.find(word);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Sentence Vocabulary::filter_oov(const TokenSentence& tokens) const {
  Sentence out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (auto id = find(t)) out.push_back(*id);
  }
  return out;
}

void Vocabulary::build_index() {
  index_.clear();
  index_.reserve(words_.size());
  total_tokens_ = 0;
  for (WordId id = 0; id < words_.size(); ++id) {
    index_.emplace(words_[id], id);
    total_tokens_ += freqs_[id];
  }
}

void Vocabulary::save_tsv(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write vocabulary file " + path.string());
  for (WordId id = 0; id < words_.size(); ++id) {
    out << words_[id] << '\t' << freqs_[id] << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

Vocabulary Vocabulary::load_tsv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read vocabulary file " + path.string());
  Vocabulary vocab;
  std::string line;
  std::size_t line_no = 0;
  std::uint64_t min_freq = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) +
                       ": expected `word<TAB>count`");
    }
    std::uint64_t count = 0;
    try {
      count = std::stoull(line.substr(tab + 1));
    } catch (const std::exception&) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) +
                       ": bad count field");
    }
    vocab.words_.push_back(line.substr(0, tab));
    vocab.freqs_.push_back(count);
    min_freq = min_freq == 0 ? count : std::min(min_freq, count);
  }
  if (vocab.words_.empty()) {
    throw ParseError("empty vocabulary file " + path.string());
  }
  vocab.min_count_ = min_freq;
  vocab.build_index();
  return vocab;
}

void VocabularyBuilder::add(const TokenSentence& tokens) {
  for (const auto& t : tokens) ++counts_[t];
}

void VocabularyBuilder::add_token(std::string_view token) {
  ++counts_[std::string(token)];
}

void VocabularyBuilder::merge(VocabularyBuilder&& other) {
  if (counts_.empty()) {
    counts_ = std::move(other.counts_);
    return;
  }
  for (auto& [word, count] : other.counts_) counts_[word] += count;
  other.counts_.clear();
}

Vocabulary VocabularyBuilder::finish(std::uint64_t min_count) const {
  std::vector<std::pair<std::string, std::uint64_t>> retained;
  for (const auto& [word, count] : counts_) {
    if (count >= min_count) retained.emplace_back(word, count);
  }
  if (retained.empty()) {
    throw ConfigError("vocabulary is empty after min_count=" +
                      std::to_string(min_count) + " filtering");
  }
  std::sort(retained.begin(), retained.end(), [](const auto& x, const auto& y) {
    if (x.second != y.second) return x.second > y.second;
    return x.first < y.first;
  });
  Vocabulary vocab;
  vocab.words_.reserve(retained.size());
  vocab.freqs_.reserve(retained.size());
  for (auto& [word, count] : retained) {
    vocab.words_.push_back(std::move(word));
    vocab.freqs_.push_back(count);
  }
  vocab.min_count_ = min_count;
  vocab.build_index();
  return vocab;
}

Vocabulary build_vocabulary(const std::vector<TokenSentence>& corpus,
                            std::uint64_t min_count) {
  VocabularyBuilder builder;
  for (const auto& s : corpus) builder.add(s);
  return builder.finish(min_count);
}

ContextWordLists ContextWordLists::from_words(std::vector<std::string> a,
                                              std::vector<std::string> b) {
  if (a.empty() || b.empty()) {
    throw ConfigError("context word groups must be non-empty");
  }
  ContextWordLists lists;
  lists.group_a = std::move(a);
  lists.group_b = std::move(b);
  auto check_group = [](const std::vector<std::string>& group,
                        const char* name) {
    for (const auto& w : group) {
      if (!valid_context_word(w)) {
        throw ConfigError(std::string("context word `") + w + "` in " + name +
                          " is not a lowercase alphanumeric token");
      }
    }
    for (std::size_t i = 0; i < group.size(); ++i) {
      for (std::size_t j = i + 1; j < group.size(); ++j) {
        if (group[i] == group[j]) {
          throw ConfigError(std::string("duplicate context word `") +
                            group[i] + "` in " + name);
        }
      }
    }
  };
  check_group(lists.group_a, "group_a");
  check_group(lists.group_b, "group_b");
  for (const auto& w : lists.group_a) {
    if (std::find(lists.group_b.begin(), lists.group_b.end(), w) !=
        lists.group_b.end()) {
      throw ConfigError("context word `" + w +
                        "` appears in both group_a and group_b");
    }
  }
  return lists;
}

ContextWordLists ContextWordLists::load_json(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read context word file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  if (!doc.contains("group_a") || !doc.contains("group_b")) {
    throw ConfigError(path.string() +
                      ": expected JSON keys `group_a` and `group_b`");
  }
  try {
    return from_words(doc["group_a"].get<std::vector<std::string>>(),
                      doc["group_b"].get<std::vector<std::string>>());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void ContextWordLists::resolve(const Vocabulary& vocab) {
  ids_a.clear();
  ids_b.clear();
  freqs_a.clear();
  freqs_b.clear();
  std::vector<std::string> missing;
  auto resolve_group = [&](const std::vector<std::string>& group,
                           std::vector<WordId>& ids,
                           std::vector<std::uint64_t>& freqs) {
    for (const auto& w : group) {
      if (auto id = vocab.find(w)) {
        ids.push_back(*id);
        freqs.push_back(vocab.freq(*id));
      } else {
        missing.push_back(w);
      }
    }
  };
  resolve_group(group_a, ids_a, freqs_a);
  resolve_group(group_b, ids_b, freqs_b);
  if (!missing.empty()) {
    std::string msg = "context words missing from vocabulary:";
    for (const auto& w : missing) msg += " " + w;
    ids_a.clear();
    ids_b.clear();
    freqs_a.clear();
    freqs_b.clear();
    throw ConfigError(msg);
  }
}

bool ContextWordLists::is_context_word(std::string_view w) const {
  return std::find(group_a.begin(), group_a.end(), w) != group_a.end() ||
         std::find(group_b.begin(), group_b.end(), w) != group_b.end();
}

std::vector<TokenSentence> read_token_lines(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read corpus file " + path.string());
  std::vector<TokenSentence> corpus;
  std::string line;
  while (std::getline(in, line)) {
    TokenSentence tokens;
    std::size_t start = 0;
    while (start < line.size()) {
      auto end = line.find(' ', start);
      if (end == std::string::npos) end = line.size();
      if (end > start) tokens.emplace_back(line.substr(start, end - start));
      start = end + 1;
    }
    corpus.push_back(std::move(tokens));
  }
  return corpus;
}

void write_token_lines(const std::filesystem::path& path,
                       const std::vector<TokenSentence>& corpus) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write corpus file " + path.string());
  for (const auto& sentence : corpus) {
    for (std::size_t i = 0; i < sentence.size(); ++i) {
      if (i) out << ' ';
      out << sentence[i];
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

std::vector<Sentence> encode_corpus(const std::vector<TokenSentence>& corpus,
                                    const Vocabulary& vocab) {
  std::vector<Sentence> encoded;
  encoded.reserve(corpus.size());
  for (const auto& tokens : corpus) encoded.push_back(vocab.filter_oov(tokens));
  return encoded;
}

}  // namespace corpusbias
