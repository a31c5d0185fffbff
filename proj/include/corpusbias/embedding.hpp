#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "corpusbias/corpus.hpp"

namespace corpusbias {

// Dense per-word vectors. Target vectors always present; context vectors
// only when trained in-repo.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;
  EmbeddingMatrix(std::vector<std::string> words, std::size_t dim);

  std::size_t size() const { return words_.size(); }
  std::size_t dim() const { return dim_; }

  std::optional<WordId> find(std::string_view word) const;
  const std::string& word(WordId id) const { return words_[id]; }
  const std::vector<std::string>& words() const { return words_; }

  std::span<const double> vec(WordId id) const {
    return {target_.data() + id * dim_, dim_};
  }
  std::span<double> vec(WordId id) {
    return {target_.data() + id * dim_, dim_};
  }

  bool has_context_vectors() const { return !context_.empty(); }
  void enable_context_vectors();
  std::span<const double> context_vec(WordId id) const {
    return {context_.data() + id * dim_, dim_};
  }
  std::span<double> context_vec(WordId id) {
    return {context_.data() + id * dim_, dim_};
  }

  // Raw parameter blocks for the trainers (Hogwild-style shared updates).
  double* target_data() { return target_.data(); }
  double* context_data() { return context_.data(); }

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, WordId> index_;
  std::size_t dim_ = 0;
  std::vector<double> target_;
  std::vector<double> context_;
};

enum class VectorFormat { glove_text, w2v_text, w2v_binary };

std::string to_string(VectorFormat f);
VectorFormat vector_format_from_string(std::string_view s);

// glove_text: `word v1 .. vd` per line, dimension fixed by the first line.
// w2v_text:   header `count dim`, then glove_text rows.
// w2v_binary: header `count dim\n`, then `word ` + dim little-endian f32,
//             with an optional trailing newline per row.
// Duplicate words keep the first occurrence (with a warning to stderr).
// Malformed rows, dimension mismatches and non-finite values raise
// ParseError with the line (or byte offset) concerned.
EmbeddingMatrix load_embeddings(const std::filesystem::path& path,
                                VectorFormat format);

// Writes target vectors. Text formats print %.6f (documented precision);
// w2v_binary stores exact little-endian f32 and round-trips bit-exactly.
void save_embeddings(const EmbeddingMatrix& emb,
                     const std::filesystem::path& path, VectorFormat format);

// u.v / (|u| |v|), clamped to [-1, 1]. Throws DataError on dimension
// mismatch or zero-norm input.
double cosine(std::span<const double> u, std::span<const double> v);

}  // namespace corpusbias
