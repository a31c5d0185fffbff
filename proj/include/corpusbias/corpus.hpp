#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace corpusbias {

using WordId = std::uint32_t;

// Id-encoded sentence. May be empty after OOV filtering; consumers must
// tolerate empty sentences.
using Sentence = std::vector<WordId>;

// Tokenized sentence before vocabulary encoding.
using TokenSentence = std::vector<std::string>;

struct PreprocessOptions {
  // Documents totaling fewer tokens than this are dropped entirely.
  std::size_t min_tokens = 50;
  // Split on . ! ? before symbol removal. When false, one input record is
  // one sentence.
  bool split_sentences = true;
};

// Lowercases, replaces every non-alphanumeric character with a space and
// splits the document into sentences of whitespace-delimited tokens.
// Alphanumeric means ASCII [0-9a-z]; all other code points, including
// multi-byte UTF-8 sequences, act as separators. Digits are retained.
// Returns an empty vector when the document totals fewer than
// opts.min_tokens tokens. Throws ParseError with the byte offset when the
// input is not valid UTF-8.
std::vector<TokenSentence> preprocess_document(std::string_view raw,
                                               const PreprocessOptions& opts);

// Frequency-filtered word <-> id mapping. Ids are dense 0..size()-1,
// assigned by descending frequency with lexicographic tie-break. freq()
// reports full post-preprocessing counts.
class Vocabulary {
 public:
  Vocabulary() = default;

  std::size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }
  std::uint64_t min_count() const { return min_count_; }

  std::optional<WordId> find(std::string_view word) const;
  const std::string& word(WordId id) const { return words_[id]; }
  std::uint64_t freq(WordId id) const { return freqs_[id]; }
  const std::vector<std::string>& words() const { return words_; }
  const std::vector<std::uint64_t>& freqs() const { return freqs_; }

  // Sum of freq over retained words.
  std::uint64_t total_tokens() const { return total_tokens_; }

  // Drops OOV tokens; survivors keep their relative order and become
  // adjacent (windows later span the gaps).
  Sentence filter_oov(const TokenSentence& tokens) const;

  // TSV `word<TAB>count`, one word per line, in id order.
  void save_tsv(const std::filesystem::path& path) const;
  static Vocabulary load_tsv(const std::filesystem::path& path);

  friend class VocabularyBuilder;

 private:
  struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept {
      return std::hash<std::string_view>{}(s);
    }
  };
  using Index = std::unordered_map<std::string, WordId, StringHash,
                                   std::equal_to<>>;

  void build_index();

  std::vector<std::string> words_;
  std::vector<std::uint64_t> freqs_;
  Index index_;
  std::uint64_t min_count_ = 0;
  std::uint64_t total_tokens_ = 0;
};

// Streaming counting pass; per-shard builders can be merged before finish().
class VocabularyBuilder {
 public:
  void add(const TokenSentence& tokens);
  void add_token(std::string_view token);
  void merge(VocabularyBuilder&& other);

  // Keeps exactly the words with count >= min_count. Throws ConfigError when
  // the result would be empty.
  Vocabulary finish(std::uint64_t min_count) const;

 private:
  std::unordered_map<std::string, std::uint64_t> counts_;
};

// Convenience wrapper over VocabularyBuilder for in-memory corpora.
Vocabulary build_vocabulary(const std::vector<TokenSentence>& corpus,
                            std::uint64_t min_count);

// The two gendered context word groups. Words are validated at load
// (non-empty, disjoint, lowercase alphanumeric, no duplicates); ids and
// frequencies are filled by resolve(), which hard-errors on any word
// missing from the vocabulary.
struct ContextWordLists {
  std::vector<std::string> group_a;  // female
  std::vector<std::string> group_b;  // male
  std::vector<WordId> ids_a;
  std::vector<WordId> ids_b;
  std::vector<std::uint64_t> freqs_a;
  std::vector<std::uint64_t> freqs_b;

  static ContextWordLists from_words(std::vector<std::string> a,
                                     std::vector<std::string> b);
  // JSON file with keys `group_a`, `group_b`.
  static ContextWordLists load_json(const std::filesystem::path& path);

  void resolve(const Vocabulary& vocab);
  bool resolved() const { return !ids_a.empty(); }
  bool is_context_word(std::string_view w) const;
};

// Preprocessed-corpus text format: one sentence per line, tokens separated
// by single spaces.
std::vector<TokenSentence> read_token_lines(const std::filesystem::path& path);
void write_token_lines(const std::filesystem::path& path,
                       const std::vector<TokenSentence>& corpus);

// Applies filter_oov to every sentence; empty sentences are kept so the
// sentence count is stable.
std::vector<Sentence> encode_corpus(const std::vector<TokenSentence>& corpus,
                                    const Vocabulary& vocab);

}  // namespace corpusbias
