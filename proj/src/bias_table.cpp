#include "corpusbias/bias_table.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "corpusbias/error.hpp"

namespace corpusbias {

void save_bias_tsv(const std::filesystem::path& path, const BiasTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  char buf[64];
  for (const auto& e : table.entries) {
    std::snprintf(buf, sizeof(buf), "%.10g\t%.10g", e.axis, e.bias);
    out << e.word << '\t' << buf << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

BiasTable load_bias_tsv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  BiasTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t1 == std::string::npos || t2 == std::string::npos || t1 == 0) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) +
                       ": expected `word<TAB>axis<TAB>bias`");
    }
    BiasEntry e;
    e.word = line.substr(0, t1);
    char* end = nullptr;
    e.axis = std::strtod(line.c_str() + t1 + 1, &end);
    if (end != line.c_str() + t2) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) +
                       ": bad axis field");
    }
    e.bias = std::strtod(line.c_str() + t2 + 1, &end);
    if (end != line.c_str() + line.size()) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) +
                       ": bad bias field");
    }
    table.entries.push_back(std::move(e));
  }
  return table;
}

}  // namespace corpusbias
