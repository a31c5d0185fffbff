#include "corpusbias/cooccurrence.hpp"

#include <algorithm>
#include <array>
#include <cstring>
#include <fstream>
#include <ostream>

#include "corpusbias/error.hpp"
#include "json.hpp"

namespace corpusbias {

std::string to_string(Weighting w) {
  return w == Weighting::flat ? "flat" : "harmonic";
}

Weighting weighting_from_string(std::string_view s) {
  if (s == "flat") return Weighting::flat;
  if (s == "harmonic") return Weighting::harmonic;
  throw ConfigError("unknown weighting `" + std::string(s) +
                    "` (expected flat|harmonic)");
}

namespace detail {

namespace {
constexpr std::size_t kInitialCapacity = 1 << 10;

// splitmix64 finalizer; packed keys are highly structured.
inline std::uint64_t mix(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ull;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebull;
  x ^= x >> 31;
  return x;
}
}  // namespace

PairAccumulator::PairAccumulator()
    : keys_(kInitialCapacity, kEmpty),
      vals_(kInitialCapacity, 0.0),
      mask_(kInitialCapacity - 1) {}

std::size_t PairAccumulator::slot(std::uint64_t key) const {
  return static_cast<std::size_t>(mix(key)) & mask_;
}

void PairAccumulator::add(std::uint64_t key, double w) {
  std::size_t i = slot(key);
  while (true) {
    if (keys_[i] == key) {
      vals_[i] += w;
      return;
    }
    if (keys_[i] == kEmpty) {
      keys_[i] = key;
      vals_[i] = w;
      if (++size_ * 2 > keys_.size()) grow();
      return;
    }
    i = (i + 1) & mask_;
  }
}

double PairAccumulator::get(std::uint64_t key) const {
  std::size_t i = slot(key);
  while (true) {
    if (keys_[i] == key) return vals_[i];
    if (keys_[i] == kEmpty) return 0.0;
    i = (i + 1) & mask_;
  }
}

void PairAccumulator::grow() {
  std::vector<std::uint64_t> old_keys(keys_.size() * 2, kEmpty);
  std::vector<double> old_vals(vals_.size() * 2, 0.0);
  old_keys.swap(keys_);
  old_vals.swap(vals_);
  mask_ = keys_.size() - 1;
  for (std::size_t i = 0; i < old_keys.size(); ++i) {
    if (old_keys[i] == kEmpty) continue;
    std::size_t j = slot(old_keys[i]);
    while (keys_[j] != kEmpty) j = (j + 1) & mask_;
    keys_[j] = old_keys[i];
    vals_[j] = old_vals[i];
  }
}

}  // namespace detail

CoocCounts::CoocCounts(std::size_t vocab_size, int window, Weighting weighting)
    : target_totals_(vocab_size, 0.0), window_(window), weighting_(weighting) {
  if (window < 1) throw ConfigError("window must be >= 1");
  if (vocab_size >= 0xffffffffull) {
    throw ConfigError("vocabulary too large for 32-bit ids");
  }
}

std::uint64_t CoocCounts::pack(WordId a, WordId b) {
  const WordId lo = std::min(a, b);
  const WordId hi = std::max(a, b);
  return (static_cast<std::uint64_t>(lo) << 32) | hi;
}

void CoocCounts::add_sentence(const Sentence& sentence) {
  const std::size_t n = sentence.size();
  const auto window = static_cast<std::size_t>(window_);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t jmax = std::min(n, i + window + 1);
    for (std::size_t j = i + 1; j < jmax; ++j) {
      const double w = weighting_ == Weighting::flat
                           ? 1.0
                           : 1.0 / static_cast<double>(j - i);
      const WordId x = sentence[i];
      const WordId y = sentence[j];
      // One unordered position pair carries both directed counts: w per
      // direction off the diagonal, 2w into the single diagonal cell.
      pairs_.add(pack(x, y), x == y ? 2.0 * w : w);
      target_totals_[x] += w;
      target_totals_[y] += w;
      grand_total_ += 2.0 * w;
    }
  }
}

void CoocCounts::merge(const CoocCounts& other) {
  if (other.window_ != window_ || other.weighting_ != weighting_ ||
      other.target_totals_.size() != target_totals_.size()) {
    throw DataError("cannot merge co-occurrence counts with different "
                    "window/weighting/vocabulary");
  }
  other.pairs_.for_each([&](std::uint64_t key, double w) {
    pairs_.add(key, w);
  });
  for (std::size_t i = 0; i < target_totals_.size(); ++i) {
    target_totals_[i] += other.target_totals_[i];
  }
  grand_total_ += other.grand_total_;
}

double CoocCounts::pair_count(WordId x, WordId y) const {
  return pairs_.get(pack(x, y));
}

double CoocCounts::group_count(WordId x, std::span<const WordId> group) const {
  double sum = 0.0;
  for (WordId y : group) sum += pairs_.get(pack(x, y));
  return sum;
}

double CoocCounts::group_total(std::span<const WordId> group) const {
  double sum = 0.0;
  for (WordId y : group) sum += target_totals_[y];
  return sum;
}

std::vector<std::tuple<WordId, WordId, double>> CoocCounts::sorted_cells()
    const {
  std::vector<std::pair<std::uint64_t, double>> cells;
  cells.reserve(pairs_.size());
  pairs_.for_each([&](std::uint64_t key, double w) {
    cells.emplace_back(key, w);
  });
  std::sort(cells.begin(), cells.end());
  std::vector<std::tuple<WordId, WordId, double>> out;
  out.reserve(cells.size());
  for (const auto& [key, w] : cells) {
    out.emplace_back(static_cast<WordId>(key >> 32),
                     static_cast<WordId>(key & 0xffffffffu), w);
  }
  return out;
}

void CoocCounts::save(const std::filesystem::path& bin_path,
                      const std::filesystem::path& sidecar_path) const {
  std::ofstream out(bin_path, std::ios::binary);
  if (!out) throw IoError("cannot write " + bin_path.string());
  for (const auto& [i, j, w] : sorted_cells()) {
    std::array<char, 16> rec;
    std::uint32_t i_le = i, j_le = j;
    double w_le = w;
    std::memcpy(rec.data(), &i_le, 4);
    std::memcpy(rec.data() + 4, &j_le, 4);
    std::memcpy(rec.data() + 8, &w_le, 8);
    out.write(rec.data(), rec.size());
  }
  if (!out) throw IoError("write failed for " + bin_path.string());
  out.close();

  nlohmann::json sidecar{{"window", window_},
                         {"weighting", to_string(weighting_)},
                         {"grand_total", grand_total_},
                         {"vocab_size", target_totals_.size()},
                         {"distinct_pairs", pairs_.size()}};
  std::ofstream side(sidecar_path, std::ios::binary);
  if (!side) throw IoError("cannot write " + sidecar_path.string());
  side << sidecar.dump(2) << '\n';
}

CoocCounts CoocCounts::load(const std::filesystem::path& bin_path,
                            const std::filesystem::path& sidecar_path) {
  std::ifstream side(sidecar_path);
  if (!side) throw IoError("cannot read " + sidecar_path.string());
  nlohmann::json sidecar;
  try {
    side >> sidecar;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(sidecar_path.string() + ": " + e.what());
  }
  CoocCounts counts(sidecar.at("vocab_size").get<std::size_t>(),
                    sidecar.at("window").get<int>(),
                    weighting_from_string(
                        sidecar.at("weighting").get<std::string>()));

  std::ifstream in(bin_path, std::ios::binary);
  if (!in) throw IoError("cannot read " + bin_path.string());
  std::array<char, 16> rec;
  std::size_t record_no = 0;
  while (in.read(rec.data(), rec.size())) {
    ++record_no;
    std::uint32_t i, j;
    double w;
    std::memcpy(&i, rec.data(), 4);
    std::memcpy(&j, rec.data() + 4, 4);
    std::memcpy(&w, rec.data() + 8, 8);
    if (i > j || j >= counts.vocab_size()) {
      throw ParseError(bin_path.string() + ": bad record " +
                       std::to_string(record_no));
    }
    counts.pairs_.add((static_cast<std::uint64_t>(i) << 32) | j, w);
    if (i == j) {
      counts.target_totals_[i] += w;
      counts.grand_total_ += w;
    } else {
      counts.target_totals_[i] += w;
      counts.target_totals_[j] += w;
      counts.grand_total_ += 2.0 * w;
    }
  }
  if (in.gcount() != 0) {
    throw ParseError(bin_path.string() + ": truncated record at end of file");
  }
  const double expected = sidecar.at("grand_total").get<double>();
  if (std::abs(counts.grand_total_ - expected) >
      1e-6 * std::max(1.0, expected)) {
    throw ParseError(bin_path.string() +
                     ": grand_total does not match sidecar");
  }
  return counts;
}

void CoocCounts::write_text(std::ostream& out) const {
  for (const auto& [i, j, w] : sorted_cells()) {
    out << i << ' ' << j << ' ' << w << '\n';
  }
}

CoocCounts count_cooccurrences(const std::vector<Sentence>& corpus,
                               std::size_t vocab_size, int window,
                               Weighting weighting) {
  CoocCounts counts(vocab_size, window, weighting);
  for (const auto& sentence : corpus) counts.add_sentence(sentence);
  return counts;
}

}  // namespace corpusbias
