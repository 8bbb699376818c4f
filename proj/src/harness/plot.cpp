#include "qxlab/harness/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "qxlab/errors.hpp"

namespace qxlab::harness {

namespace fs = std::filesystem;

namespace {

constexpr double kWidth = 640, kHeight = 400;
constexpr double kLeft = 70, kRight = 150, kTop = 40, kBottom = 50;
const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::vector<double> nice_ticks(double lo, double hi) {
  const double span = hi - lo;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    step = m * mag;
    if (span / step <= 6.0) break;
  }
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * span; t += step) ticks.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
  return ticks;
}

}  // namespace

PlotSeries series_from_aggregate(const CsvTable& table, const std::string& label, const std::string& metric, RowKind kind) {
  PlotSeries s;
  s.label = label;
  if (table.rows.empty()) return s;
  const auto ck = table.column("kind"), ce = table.column("episode");
  const auto cm = table.column(metric + "_mean_smooth"), cs = table.column(metric + "_std_smooth");
  if (ck == std::string::npos || ce == std::string::npos || cm == std::string::npos || cs == std::string::npos)
    throw ParseError(table.source + ":1: missing columns for metric '" + metric + "'");
  const std::string want = kind == RowKind::Train ? "train" : "eval";
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& k = table.rows[i][ck];
    if (k != "train" && k != "eval")
      throw ParseError(table.source + ":" + std::to_string(table.lines[i]) + ": unknown row kind '" + k + "'");
    if (k != want) continue;
    const double m = table.number(i, cm), sd = table.number(i, cs);
    s.x.push_back(table.number(i, ce));
    s.mean.push_back(m);
    s.lo.push_back(m - sd);
    s.hi.push_back(m + sd);
  }
  return s;
}

std::string render_svg(const std::vector<PlotSeries>& series, const std::string& title, const std::string& y_label) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.lo[i]);
      ymax = std::max(ymax, s.hi[i]);
    }
  }
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) ymin -= 0.5, ymax += 0.5;
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) { return kTop + (ymax - y) / (ymax - ymin) * ph; };

  std::string svg = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
         "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + num(kLeft) + "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">" + escape(title) + "</text>\n";
  svg += "<g class=\"axes\" stroke=\"black\" stroke-width=\"1\">\n";
  svg += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kTop + ph) + "\" x2=\"" + num(kLeft + pw) + "\" y2=\"" + num(kTop + ph) + "\"/>\n";
  svg += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kTop) + "\" x2=\"" + num(kLeft) + "\" y2=\"" + num(kTop + ph) + "\"/>\n";
  svg += "</g>\n<g font-family=\"sans-serif\" font-size=\"10\">\n";
  for (double t : nice_ticks(xmin, xmax)) {
    svg += "<line x1=\"" + num(px(t)) + "\" y1=\"" + num(kTop + ph) + "\" x2=\"" + num(px(t)) + "\" y2=\"" + num(kTop + ph + 4) +
           "\" stroke=\"black\"/>";
    svg += "<text x=\"" + num(px(t)) + "\" y=\"" + num(kTop + ph + 16) + "\" text-anchor=\"middle\">" + tick_label(t) + "</text>\n";
  }
  for (double t : nice_ticks(ymin, ymax)) {
    svg += "<line x1=\"" + num(kLeft - 4) + "\" y1=\"" + num(py(t)) + "\" x2=\"" + num(kLeft) + "\" y2=\"" + num(py(t)) +
           "\" stroke=\"black\"/>";
    svg += "<text x=\"" + num(kLeft - 6) + "\" y=\"" + num(py(t) + 3) + "\" text-anchor=\"end\">" + tick_label(t) + "</text>\n";
  }
  svg += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"" + num(kHeight - 12) + "\" text-anchor=\"middle\">episode</text>\n";
  svg += "<text x=\"16\" y=\"" + num(kTop + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " + num(kTop + ph / 2) +
         ")\">" + escape(y_label) + "</text>\n</g>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const std::string color = kPalette[k % (sizeof kPalette / sizeof kPalette[0])];
    if (!s.x.empty()) {
      std::string band;
      for (std::size_t i = 0; i < s.x.size(); ++i) band += num(px(s.x[i])) + "," + num(py(s.hi[i])) + " ";
      for (std::size_t i = s.x.size(); i-- > 0;) band += num(px(s.x[i])) + "," + num(py(s.lo[i])) + " ";
      band.pop_back();
      svg += "<polygon class=\"band\" fill=\"" + color + "\" fill-opacity=\"0.2\" stroke=\"none\" points=\"" + band + "\"/>\n";
      std::string line;
      for (std::size_t i = 0; i < s.x.size(); ++i) line += num(px(s.x[i])) + "," + num(py(s.mean[i])) + " ";
      line.pop_back();
      svg += "<polyline class=\"mean\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\" points=\"" + line + "\"/>\n";
    }
    const double ly = kTop + 14.0 * static_cast<double>(k);
    svg += "<line x1=\"" + num(kLeft + pw + 10) + "\" y1=\"" + num(ly) + "\" x2=\"" + num(kLeft + pw + 28) + "\" y2=\"" + num(ly) +
           "\" stroke=\"" + color + "\" stroke-width=\"2\"/>";
    svg += "<text class=\"legend\" x=\"" + num(kLeft + pw + 32) + "\" y=\"" + num(ly + 3) +
           "\" font-family=\"sans-serif\" font-size=\"10\">" + escape(s.label) + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

std::vector<fs::path> emit_plots(const std::vector<PlotInput>& inputs, const fs::path& out_dir) {
  std::vector<CsvTable> tables;
  for (const auto& in : inputs) tables.push_back(read_csv(in.aggregate_csv));
  bool any_eval = false;
  for (const auto& t : tables) {
    const auto ck = t.column("kind");
    for (const auto& row : t.rows) any_eval = any_eval || (ck != std::string::npos && row[ck] == "eval");
  }
  fs::create_directories(out_dir);
  std::vector<fs::path> files;
  for (RowKind kind : {RowKind::Train, RowKind::Eval}) {
    if (kind == RowKind::Eval && !any_eval) continue;
    const std::string kname = kind == RowKind::Train ? "train" : "eval";
    for (const auto& metric : metric_names()) {
      std::vector<PlotSeries> series;
      for (std::size_t i = 0; i < inputs.size(); ++i) series.push_back(series_from_aggregate(tables[i], inputs[i].label, metric, kind));
      const auto file = out_dir / (metric + "_" + kname + ".svg");
      write_text(file, render_svg(series, metric + " (" + kname + ")", metric));
      files.push_back(file);
    }
  }
  return files;
}

std::vector<PlotInput> find_aggregates(const fs::path& dir) {
  if (fs::exists(dir / "aggregate.csv")) return {{dir.filename().string(), dir / "aggregate.csv"}};
  std::vector<PlotInput> out;
  if (!fs::is_directory(dir)) throw ParseError("no such directory " + dir.string());
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_directory() && fs::exists(e.path() / "aggregate.csv")) out.push_back({e.path().filename().string(), e.path() / "aggregate.csv"});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.label < b.label; });
  if (out.empty()) throw ParseError("no aggregate.csv under " + dir.string());
  return out;
}

}  // namespace qxlab::harness
