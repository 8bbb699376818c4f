#include "qxlab/harness/metrics.hpp"

#include "qxlab/errors.hpp"
#include "qxlab/harness/config.hpp"
#include "qxlab/harness/csv.hpp"

namespace qxlab::harness {

namespace {

const std::vector<std::string> kColumns{"seed",          "episode",     "kind",          "env_steps",
                                        "return_q",      "return_qx",   "success",       "mean_position",
                                        "mean_position_qx", "mean_rx",  "mean_td_abs",   "intrinsic_mean"};

}  // namespace

const std::vector<std::string>& metric_names() {
  static const std::vector<std::string> names{"env_steps",        "return_q", "return_qx",   "success",       "mean_position",
                                              "mean_position_qx", "mean_rx",  "mean_td_abs", "intrinsic_mean"};
  return names;
}

double metric_value(const MetricsRow& r, const std::string& name) {
  if (name == "env_steps") return static_cast<double>(r.env_steps);
  if (name == "return_q") return r.return_q;
  if (name == "return_qx") return r.return_qx;
  if (name == "success") return r.success;
  if (name == "mean_position") return r.mean_position;
  if (name == "mean_position_qx") return r.mean_position_qx;
  if (name == "mean_rx") return r.mean_rx;
  if (name == "mean_td_abs") return r.mean_td_abs;
  if (name == "intrinsic_mean") return r.intrinsic_mean;
  throw ConfigError("unknown metric '" + name + "'");
}

std::string csv_header() {
  std::string h;
  for (std::size_t i = 0; i < kColumns.size(); ++i) h += (i ? "," : "") + kColumns[i];
  return h + "\n";
}

std::string csv_line(const MetricsRow& r) {
  std::string s = std::to_string(r.seed) + "," + std::to_string(r.episode) + "," +
                  (r.kind == RowKind::Train ? "train" : "eval") + "," + std::to_string(r.env_steps);
  for (double v : {r.return_q, r.return_qx, r.success, r.mean_position, r.mean_position_qx, r.mean_rx, r.mean_td_abs,
                   r.intrinsic_mean})
    s += "," + format_double(v);
  return s + "\n";
}

void write_metrics(const std::filesystem::path& file, const std::vector<MetricsRow>& rows) {
  std::string text = csv_header();
  for (const auto& r : rows) text += csv_line(r);
  write_text(file, text);
}

std::vector<MetricsRow> read_metrics(const std::filesystem::path& file) {
  const auto t = read_csv(file);
  if (t.header != kColumns) throw ParseError(file.string() + ":1: unexpected metrics header");
  std::vector<MetricsRow> rows;
  rows.reserve(t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    MetricsRow r;
    r.seed = static_cast<std::uint64_t>(t.number(i, 0));
    r.episode = static_cast<std::size_t>(t.number(i, 1));
    const auto& kind = t.rows[i][2];
    if (kind == "train") r.kind = RowKind::Train;
    else if (kind == "eval") r.kind = RowKind::Eval;
    else throw ParseError(file.string() + ":" + std::to_string(t.lines[i]) + ": unknown row kind '" + kind + "'");
    r.env_steps = static_cast<std::size_t>(t.number(i, 3));
    double* dst[] = {&r.return_q, &r.return_qx,   &r.success,       &r.mean_position,
                     &r.mean_position_qx, &r.mean_rx, &r.mean_td_abs, &r.intrinsic_mean};
    for (std::size_t c = 0; c < 8; ++c) *dst[c] = t.number(i, 4 + c);
    rows.push_back(r);
  }
  return rows;
}

std::vector<MetricsRow> rows_of_kind(const std::vector<MetricsRow>& rows, RowKind kind) {
  std::vector<MetricsRow> out;
  for (const auto& r : rows) {
    if (r.kind == kind) out.push_back(r);
  }
  return out;
}

}  // namespace qxlab::harness
