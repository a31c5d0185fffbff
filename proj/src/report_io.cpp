#include "corpusbias/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "corpusbias/error.hpp"
#include "json.hpp"

namespace corpusbias {

namespace {

std::string fmt_num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

nlohmann::json num_or_null(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return nullptr;  // only the open top edge hits this
  return v;
}

}  // namespace

std::string to_string(ReportFormat f) {
  switch (f) {
    case ReportFormat::csv:
      return "csv";
    case ReportFormat::json:
      return "json";
    case ReportFormat::svg:
      return "svg";
  }
  return "csv";
}

ReportFormat report_format_from_string(std::string_view s) {
  if (s == "csv") return ReportFormat::csv;
  if (s == "json") return ReportFormat::json;
  if (s == "svg") return ReportFormat::svg;
  throw ConfigError("unknown report format `" + std::string(s) +
                    "` (expected csv|json|svg)");
}

void write_report_csv(const BinReport& report, std::ostream& out) {
  out << "bin_lo,bin_hi,n_words,mean,sd,effect_size,q05,q25,q50,q75,q95\n";
  for (const auto& b : report.bins) {
    out << fmt_num(b.lo) << ',' << fmt_num(b.hi) << ',' << b.n_words << ',';
    out << (b.n_words > 0 ? fmt_num(b.mean) : "") << ',';
    out << (b.sample_sd ? fmt_num(*b.sample_sd) : "") << ',';
    out << (b.effect_size ? fmt_num(*b.effect_size) : "");
    for (double q : b.quantiles) {
      out << ',' << (b.n_words > 0 ? fmt_num(q) : "");
    }
    out << '\n';
  }
}

void write_report_json(const BinReport& report, std::ostream& out) {
  nlohmann::json doc;
  doc["kind"] = report.scheme.kind == BinScheme::Kind::log10_frequency
                    ? "log10_frequency"
                    : "log10_rank";
  doc["edges"] = report.scheme.edges;
  doc["total_words"] = report.total_words;
  auto& bins = doc["bins"] = nlohmann::json::array();
  for (const auto& b : report.bins) {
    nlohmann::json jb;
    jb["lo"] = b.lo;
    jb["hi"] = num_or_null(b.hi);  // null = open-ended
    jb["n_words"] = b.n_words;
    jb["mean"] = b.n_words > 0 ? num_or_null(b.mean) : nullptr;
    jb["sd"] = b.sample_sd ? nlohmann::json(*b.sample_sd) : nullptr;
    jb["effect_size"] =
        b.effect_size ? nlohmann::json(*b.effect_size) : nullptr;
    if (b.n_words > 0) {
      jb["quantiles"] = {{"q05", b.quantiles[0]},
                         {"q25", b.quantiles[1]},
                         {"q50", b.quantiles[2]},
                         {"q75", b.quantiles[3]},
                         {"q95", b.quantiles[4]}};
    } else {
      jb["quantiles"] = nullptr;
    }
    bins.push_back(std::move(jb));
  }
  out << doc.dump(2) << '\n';
}

BinReport load_report_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read report " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  BinReport report;
  try {
    report.scheme.kind = doc.at("kind").get<std::string>() == "log10_rank"
                             ? BinScheme::Kind::log10_rank
                             : BinScheme::Kind::log10_frequency;
    report.scheme.edges = doc.at("edges").get<std::vector<double>>();
    report.total_words = doc.at("total_words").get<std::size_t>();
    for (const auto& jb : doc.at("bins")) {
      BinStats b;
      b.lo = jb.at("lo").get<double>();
      b.hi = jb.at("hi").is_null()
                 ? std::numeric_limits<double>::infinity()
                 : jb.at("hi").get<double>();
      b.n_words = jb.at("n_words").get<std::size_t>();
      b.mean = jb.at("mean").is_null()
                   ? std::numeric_limits<double>::quiet_NaN()
                   : jb.at("mean").get<double>();
      if (!jb.at("sd").is_null()) b.sample_sd = jb.at("sd").get<double>();
      if (!jb.at("effect_size").is_null()) {
        b.effect_size = jb.at("effect_size").get<double>();
      }
      if (jb.at("quantiles").is_null()) {
        b.quantiles.fill(std::numeric_limits<double>::quiet_NaN());
      } else {
        const auto& q = jb.at("quantiles");
        b.quantiles = {q.at("q05").get<double>(), q.at("q25").get<double>(),
                       q.at("q50").get<double>(), q.at("q75").get<double>(),
                       q.at("q95").get<double>()};
      }
      report.bins.push_back(std::move(b));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return report;
}

namespace {

// Fixed-size figure; x positions by bin index, y scaled to the quantile
// range across non-empty bins.
constexpr double kWidth = 900.0;
constexpr double kHeight = 420.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 20.0;
constexpr double kMarginBottom = 60.0;

}  // namespace

void write_report_svg(const BinReport& report, std::ostream& out) {
  double ymin = 0.0, ymax = 0.0;
  bool any = false;
  for (const auto& b : report.bins) {
    if (b.n_words == 0) continue;
    const double lo = b.quantiles[0], hi = b.quantiles[4];
    if (!any) {
      ymin = lo;
      ymax = hi;
      any = true;
    } else {
      ymin = std::min(ymin, lo);
      ymax = std::max(ymax, hi);
    }
  }
  if (!any) {
    ymin = -1.0;
    ymax = 1.0;
  }
  if (ymax - ymin < 1e-12) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  const double pad = 0.08 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;

  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  const auto n = static_cast<double>(report.bins.size());
  auto x_of = [&](std::size_t k) {
    return kMarginLeft + plot_w * (static_cast<double>(k) + 0.5) / n;
  };
  auto y_of = [&](double v) {
    return kMarginTop + plot_h * (ymax - v) / (ymax - ymin);
  };

  char buf[256];
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' '
      << kHeight << "\">\n";
  out << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  // Zero line.
  if (ymin < 0.0 && ymax > 0.0) {
    std::snprintf(buf, sizeof(buf),
                  "  <line x1=\"%.1f\" y1=\"%.2f\" x2=\"%.1f\" y2=\"%.2f\" "
                  "stroke=\"#bbbbbb\" stroke-dasharray=\"4 3\"/>\n",
                  kMarginLeft, y_of(0.0), kWidth - kMarginRight, y_of(0.0));
    out << buf;
  }
  const double box_w = std::min(40.0, plot_w / n * 0.5);
  for (std::size_t k = 0; k < report.bins.size(); ++k) {
    const auto& b = report.bins[k];
    const double x = x_of(k);
    // Bin label along the x axis.
    std::string range = (k == 0 ? "[" : "(") + fmt_num(b.lo) + ", " +
                        (std::isinf(b.hi) ? std::string("inf")
                                          : fmt_num(b.hi)) +
                        "]";
    std::snprintf(buf, sizeof(buf),
                  "  <text class=\"bin-label\" x=\"%.1f\" y=\"%.1f\" "
                  "font-size=\"9\" text-anchor=\"middle\">%s</text>\n",
                  x, kHeight - kMarginBottom + 28.0, range.c_str());
    out << buf;
    // Effect-size label, one per bin.
    const std::string d_label =
        b.effect_size ? "d=" + fmt_num(*b.effect_size) : "d=n/a";
    std::snprintf(buf, sizeof(buf),
                  "  <text class=\"effect-size\" x=\"%.1f\" y=\"%.1f\" "
                  "font-size=\"11\" fill=\"#1f4e9c\" "
                  "text-anchor=\"middle\">%s</text>\n",
                  x, kHeight - kMarginBottom + 44.0, d_label.c_str());
    out << buf;
    if (b.n_words == 0) continue;
    // Whiskers q05..q95, box q25..q75, median, mean dot.
    std::snprintf(buf, sizeof(buf),
                  "  <line x1=\"%.1f\" y1=\"%.2f\" x2=\"%.1f\" y2=\"%.2f\" "
                  "stroke=\"black\"/>\n",
                  x, y_of(b.quantiles[0]), x, y_of(b.quantiles[4]));
    out << buf;
    std::snprintf(buf, sizeof(buf),
                  "  <rect x=\"%.1f\" y=\"%.2f\" width=\"%.1f\" "
                  "height=\"%.2f\" fill=\"#dce6f5\" stroke=\"black\"/>\n",
                  x - box_w / 2, y_of(b.quantiles[3]), box_w,
                  y_of(b.quantiles[1]) - y_of(b.quantiles[3]));
    out << buf;
    std::snprintf(buf, sizeof(buf),
                  "  <line x1=\"%.1f\" y1=\"%.2f\" x2=\"%.1f\" y2=\"%.2f\" "
                  "stroke=\"black\"/>\n",
                  x - box_w / 2, y_of(b.quantiles[2]), x + box_w / 2,
                  y_of(b.quantiles[2]));
    out << buf;
    std::snprintf(buf, sizeof(buf),
                  "  <circle cx=\"%.1f\" cy=\"%.2f\" r=\"4\" "
                  "fill=\"#1f4e9c\"/>\n",
                  x, y_of(b.mean));
    out << buf;
  }
  // Y axis with min/zero/max ticks.
  std::snprintf(buf, sizeof(buf),
                "  <line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
                "stroke=\"black\"/>\n",
                kMarginLeft, kMarginTop, kMarginLeft, kHeight - kMarginBottom);
  out << buf;
  for (double v : {ymin + pad, 0.0, ymax - pad}) {
    if (v < ymin || v > ymax) continue;
    std::snprintf(buf, sizeof(buf),
                  "  <text x=\"%.1f\" y=\"%.2f\" font-size=\"10\" "
                  "text-anchor=\"end\">%s</text>\n",
                  kMarginLeft - 6.0, y_of(v) + 3.0, fmt_num(v).c_str());
    out << buf;
  }
  out << "</svg>\n";
}

void emit_plot_data(const BinReport& report, ReportFormat format,
                    const std::filesystem::path& path) {
  if (report.bins.empty()) throw DataError("cannot emit an empty report");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write report " + path.string());
  switch (format) {
    case ReportFormat::csv:
      write_report_csv(report, out);
      break;
    case ReportFormat::json:
      write_report_json(report, out);
      break;
    case ReportFormat::svg:
      write_report_svg(report, out);
      break;
  }
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace corpusbias
