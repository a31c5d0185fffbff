#include "corpusbias/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>

#include "corpusbias/error.hpp"

namespace corpusbias {

EmbeddingMatrix::EmbeddingMatrix(std::vector<std::string> words,
                                 std::size_t dim)
    : words_(std::move(words)), dim_(dim), target_(words_.size() * dim, 0.0) {
  index_.reserve(words_.size());
  for (WordId id = 0; id < words_.size(); ++id) {
    auto [it, inserted] = index_.emplace(words_[id], id);
    if (!inserted) {
      throw DataError("duplicate word `" + words_[id] +
                      "` in embedding matrix");
    }
  }
}

std::optional<WordId> EmbeddingMatrix::find(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void EmbeddingMatrix::enable_context_vectors() {
  context_.assign(words_.size() * dim_, 0.0);
}

std::string to_string(VectorFormat f) {
  switch (f) {
    case VectorFormat::glove_text:
      return "glove_text";
    case VectorFormat::w2v_text:
      return "w2v_text";
    case VectorFormat::w2v_binary:
      return "w2v_binary";
  }
  return "glove_text";
}

VectorFormat vector_format_from_string(std::string_view s) {
  if (s == "glove_text") return VectorFormat::glove_text;
  if (s == "w2v_text") return VectorFormat::w2v_text;
  if (s == "w2v_binary") return VectorFormat::w2v_binary;
  throw ConfigError("unknown vector format `" + std::string(s) +
                    "` (expected glove_text|w2v_text|w2v_binary)");
}

namespace {

struct ParsedRows {
  std::vector<std::string> words;
  std::vector<std::vector<double>> vectors;
};

void parse_text_row(const std::string& line, const std::string& file,
                    std::size_t line_no, std::size_t expected_dim,
                    ParsedRows& rows) {
  const auto space = line.find(' ');
  if (space == std::string::npos || space == 0) {
    throw ParseError(file + ":" + std::to_string(line_no) +
                     ": expected `word v1 .. vd`");
  }
  std::vector<double> vec;
  if (expected_dim) vec.reserve(expected_dim);
  const char* p = line.c_str() + space;
  const char* line_end = line.c_str() + line.size();
  while (p < line_end) {
    char* end = nullptr;
    const double v = std::strtod(p, &end);
    if (end == p) {
      // Trailing spaces are tolerated; anything else is malformed.
      while (p < line_end && *p == ' ') ++p;
      if (p != line_end) {
        throw ParseError(file + ":" + std::to_string(line_no) +
                         ": malformed vector component");
      }
      break;
    }
    if (!std::isfinite(v)) {
      throw ParseError(file + ":" + std::to_string(line_no) +
                       ": non-finite vector component");
    }
    vec.push_back(v);
    p = end;
  }
  if (expected_dim && vec.size() != expected_dim) {
    throw ParseError(file + ":" + std::to_string(line_no) + ": row has " +
                     std::to_string(vec.size()) + " values, expected " +
                     std::to_string(expected_dim));
  }
  if (vec.empty()) {
    throw ParseError(file + ":" + std::to_string(line_no) +
                     ": row has no vector components");
  }
  rows.words.push_back(line.substr(0, space));
  rows.vectors.push_back(std::move(vec));
}

EmbeddingMatrix from_rows(ParsedRows&& rows, const std::string& file) {
  if (rows.words.empty()) throw ParseError(file + ": no vectors found");
  // Duplicates: first occurrence wins.
  std::vector<std::string> words;
  std::vector<std::size_t> keep;
  std::unordered_map<std::string, WordId> seen;
  for (std::size_t i = 0; i < rows.words.size(); ++i) {
    if (seen.emplace(rows.words[i], 0).second) {
      words.push_back(rows.words[i]);
      keep.push_back(i);
    } else {
      std::cerr << "warning: duplicate word `" << rows.words[i] << "` in "
                << file << ", keeping the first occurrence\n";
    }
  }
  EmbeddingMatrix emb(std::move(words), rows.vectors.front().size());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    auto dst = emb.vec(static_cast<WordId>(i));
    const auto& src = rows.vectors[keep[i]];
    std::copy(src.begin(), src.end(), dst.begin());
  }
  return emb;
}

std::pair<std::size_t, std::size_t> parse_w2v_header(const std::string& line,
                                                     const std::string& file) {
  std::istringstream iss(line);
  long long count = 0, dim = 0;
  if (!(iss >> count >> dim) || count <= 0 || dim <= 0) {
    throw ParseError(file + ":1: malformed header, expected `count dim`");
  }
  std::string rest;
  if (iss >> rest) {
    throw ParseError(file + ":1: malformed header, expected `count dim`");
  }
  return {static_cast<std::size_t>(count), static_cast<std::size_t>(dim)};
}

EmbeddingMatrix load_glove_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read vector file " + path.string());
  ParsedRows rows;
  std::string line;
  std::size_t line_no = 0;
  std::size_t dim = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    parse_text_row(line, path.string(), line_no, dim, rows);
    dim = rows.vectors.front().size();
  }
  return from_rows(std::move(rows), path.string());
}

EmbeddingMatrix load_w2v_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read vector file " + path.string());
  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError(path.string() + ": empty file");
  }
  const auto [count, dim] = parse_w2v_header(line, path.string());
  ParsedRows rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    parse_text_row(line, path.string(), line_no, dim, rows);
  }
  if (rows.words.size() != count) {
    throw ParseError(path.string() + ": header declares " +
                     std::to_string(count) + " words, file has " +
                     std::to_string(rows.words.size()));
  }
  return from_rows(std::move(rows), path.string());
}

EmbeddingMatrix load_w2v_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read vector file " + path.string());
  std::string header;
  if (!std::getline(in, header)) {
    throw ParseError(path.string() + ": empty file");
  }
  const auto [count, dim] = parse_w2v_header(header, path.string());
  ParsedRows rows;
  std::vector<float> buf(dim);
  for (std::size_t r = 0; r < count; ++r) {
    std::string word;
    char c;
    // Skip the newline some writers append after each vector.
    while (in.get(c) && (c == '\n' || c == ' ')) {
    }
    if (!in) {
      throw ParseError(path.string() + ": truncated at word " +
                       std::to_string(r + 1) + " of " + std::to_string(count) +
                       " (byte offset " + std::to_string(in.tellg()) + ")");
    }
    word.push_back(c);
    while (in.get(c) && c != ' ') word.push_back(c);
    in.read(reinterpret_cast<char*>(buf.data()),
            static_cast<std::streamsize>(dim * sizeof(float)));
    if (in.gcount() != static_cast<std::streamsize>(dim * sizeof(float))) {
      throw ParseError(path.string() + ": truncated vector for word `" + word +
                       "` (record " + std::to_string(r + 1) + ")");
    }
    std::vector<double> vec(dim);
    for (std::size_t k = 0; k < dim; ++k) {
      if (!std::isfinite(buf[k])) {
        throw ParseError(path.string() + ": non-finite component in word `" +
                         word + "` (record " + std::to_string(r + 1) + ")");
      }
      vec[k] = static_cast<double>(buf[k]);
    }
    rows.words.push_back(std::move(word));
    rows.vectors.push_back(std::move(vec));
  }
  return from_rows(std::move(rows), path.string());
}

void write_text_vector(std::ostream& out, std::span<const double> v) {
  char buf[32];
  for (double x : v) {
    std::snprintf(buf, sizeof(buf), " %.6f", x);
    out << buf;
  }
  out << '\n';
}

}  // namespace

EmbeddingMatrix load_embeddings(const std::filesystem::path& path,
                                VectorFormat format) {
  switch (format) {
    case VectorFormat::glove_text:
      return load_glove_text(path);
    case VectorFormat::w2v_text:
      return load_w2v_text(path);
    case VectorFormat::w2v_binary:
      return load_w2v_binary(path);
  }
  throw ConfigError("unknown vector format");
}

void save_embeddings(const EmbeddingMatrix& emb,
                     const std::filesystem::path& path, VectorFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write vector file " + path.string());
  switch (format) {
    case VectorFormat::glove_text:
      for (WordId id = 0; id < emb.size(); ++id) {
        out << emb.word(id);
        write_text_vector(out, emb.vec(id));
      }
      break;
    case VectorFormat::w2v_text:
      out << emb.size() << ' ' << emb.dim() << '\n';
      for (WordId id = 0; id < emb.size(); ++id) {
        out << emb.word(id);
        write_text_vector(out, emb.vec(id));
      }
      break;
    case VectorFormat::w2v_binary: {
      out << emb.size() << ' ' << emb.dim() << '\n';
      std::vector<float> buf(emb.dim());
      for (WordId id = 0; id < emb.size(); ++id) {
        out << emb.word(id) << ' ';
        const auto v = emb.vec(id);
        for (std::size_t k = 0; k < emb.dim(); ++k) {
          buf[k] = static_cast<float>(v[k]);
        }
        out.write(reinterpret_cast<const char*>(buf.data()),
                  static_cast<std::streamsize>(buf.size() * sizeof(float)));
        out << '\n';
      }
      break;
    }
  }
  if (!out) throw IoError("write failed for " + path.string());
}

double cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    throw DataError("cosine: dimension mismatch (" + std::to_string(u.size()) +
                    " vs " + std::to_string(v.size()) + ")");
  }
  double dot = 0.0, nu = 0.0, nv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    nu += u[i] * u[i];
    nv += v[i] * v[i];
  }
  if (nu == 0.0 || nv == 0.0) {
    throw DataError("cosine: zero-norm vector");
  }
  return std::clamp(dot / (std::sqrt(nu) * std::sqrt(nv)), -1.0, 1.0);
}

}  // namespace corpusbias
