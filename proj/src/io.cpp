#include "lrspin/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "lrspin/errors.hpp"

namespace lrspin {

std::string format_g17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string table_csv(const Metadata& meta, const std::vector<std::string>& headers,
                      const std::vector<const std::vector<double>*>& columns) {
  if (headers.size() != columns.size() || columns.empty())
    throw ValidationError("csv: header/column mismatch");
  const std::size_t rows = columns.front()->size();
  for (const auto* c : columns)
    if (c->size() != rows) throw ValidationError("csv: ragged columns");

  std::ostringstream os;
  os << "# format_version=" << kSchemaVersion << "\n";
  for (const auto& [k, v] : meta) os << "# " << k << "=" << v << "\n";
  for (std::size_t h = 0; h < headers.size(); ++h)
    os << headers[h] << (h + 1 < headers.size() ? "," : "\n");
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < columns.size(); ++c)
      os << format_g17((*columns[c])[r]) << (c + 1 < columns.size() ? "," : "\n");
  return os.str();
}

std::string series_csv(const TimeSeries& series, const Metadata& meta) {
  Metadata m = meta;
  m.emplace_back("mode", to_string(series.mode));
  m.emplace_back("digest", series.digest);
  return table_csv(m, {"t", "value"}, {&series.times, &series.values});
}

nlohmann::json metadata_json(const Metadata& meta) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : meta) j[k] = v;
  return j;
}

nlohmann::json series_json(const TimeSeries& series, const Metadata& meta) {
  return nlohmann::json{{"schema_version", kSchemaVersion},
                        {"config", metadata_json(meta)},
                        {"results",
                         {{"mode", to_string(series.mode)},
                          {"digest", series.digest},
                          {"times", series.times},
                          {"values", series.values}}}};
}

TimeSeries series_from_json(const nlohmann::json& doc) {
  const auto& res = doc.at("results");
  TimeSeries s;
  s.times = res.at("times").get<std::vector<double>>();
  s.values = res.at("values").get<std::vector<double>>();
  s.digest = res.at("digest").get<std::string>();
  s.mode = res.at("mode").get<std::string>() == "as_published" ? EvalMode::as_published
                                                               : EvalMode::hamiltonian_exact;
  return s;
}

nlohmann::json report_json(const EquilibrationReport& report, const Metadata& meta) {
  return nlohmann::json{{"schema_version", kSchemaVersion},
                        {"config", metadata_json(meta)},
                        {"results",
                         {{"theta", report.theta},
                          {"alpha", report.alpha},
                          {"dimension", report.dimension},
                          {"n", report.n_values},
                          {"tau0", report.tau0},
                          {"gamma", report.gamma},
                          {"gamma_stderr", report.gamma_stderr},
                          {"residuals", report.residuals}}}};
}

std::string report_lnln_csv(const EquilibrationReport& report, const Metadata& meta) {
  std::vector<double> ln_n(report.n_values.size()), ln_tau(report.tau0.size());
  for (std::size_t i = 0; i < ln_n.size(); ++i) {
    ln_n[i] = std::log(static_cast<double>(report.n_values[i]));
    ln_tau[i] = std::log(report.tau0[i]);
  }
  return table_csv(meta, {"ln_n", "ln_tau0"}, {&ln_n, &ln_tau});
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open for writing: " + path);
  out << content;
  if (!out) throw ValidationError("write failed: " + path);
}

namespace {

struct AxisMap {
  double lo = 0.0, hi = 1.0;
  double pix_lo = 0.0, pix_hi = 1.0;
  bool log_scale = false;

  double operator()(double v) const {
    const double x = log_scale ? std::log10(v) : v;
    const double a = log_scale ? std::log10(lo) : lo;
    const double b = log_scale ? std::log10(hi) : hi;
    return pix_lo + (x - a) / (b - a) * (pix_hi - pix_lo);
  }
};

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

}  // namespace

std::string svg_line_chart(const std::string& title, const std::string& x_label,
                           const std::string& y_label, const std::vector<SvgSeries>& series,
                           bool log_x) {
  constexpr double w = 860, h = 520, ml = 70, mr = 160, mt = 40, mb = 50;
  double x_lo = 1e300, x_hi = -1e300, y_lo = 1e300, y_hi = -1e300;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (log_x && !(s.x[i] > 0.0)) continue;
      x_lo = std::min(x_lo, s.x[i]);
      x_hi = std::max(x_hi, s.x[i]);
      y_lo = std::min(y_lo, s.y[i]);
      y_hi = std::max(y_hi, s.y[i]);
    }
  if (!(x_lo < x_hi)) x_hi = x_lo + 1;
  if (!(y_lo < y_hi)) y_hi = y_lo + 1;
  const double pad = 0.05 * (y_hi - y_lo);
  y_lo -= pad;
  y_hi += pad;
  const AxisMap xm{x_lo, x_hi, ml, w - mr, log_x};
  const AxisMap ym{y_lo, y_hi, h - mb, mt, false};

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
     << "\" viewBox=\"0 0 " << w << " " << h << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << w / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"16\">"
     << title << "</text>\n"
     << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << w - ml - mr
     << "\" height=\"" << h - mt - mb << "\" fill=\"none\" stroke=\"black\"/>\n";

  constexpr int kTicks = 5;
  for (int i = 0; i <= kTicks; ++i) {
    const double fx = log_x ? std::pow(10.0, std::log10(x_lo) +
                                                 (std::log10(x_hi) - std::log10(x_lo)) * i / kTicks)
                            : x_lo + (x_hi - x_lo) * i / kTicks;
    const double fy = y_lo + (y_hi - y_lo) * i / kTicks;
    os << "<text x=\"" << xm(fx) << "\" y=\"" << h - mb + 18
       << "\" text-anchor=\"middle\" font-size=\"11\">" << format_g17(fx).substr(0, 8)
       << "</text>\n"
       << "<text x=\"" << ml - 8 << "\" y=\"" << ym(fy) + 4
       << "\" text-anchor=\"end\" font-size=\"11\">" << format_g17(fy).substr(0, 8)
       << "</text>\n";
  }
  os << "<text x=\"" << (ml + w - mr) / 2 << "\" y=\"" << h - 10
     << "\" text-anchor=\"middle\" font-size=\"13\">" << x_label << "</text>\n"
     << "<text x=\"16\" y=\"" << (mt + h - mb) / 2
     << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
     << (mt + h - mb) / 2 << ")\">" << y_label << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.2\" points=\"";
    for (std::size_t i = 0; i < series[s].x.size(); ++i) {
      if (log_x && !(series[s].x[i] > 0.0)) continue;
      os << xm(series[s].x[i]) << "," << ym(series[s].y[i]) << " ";
    }
    os << "\"/>\n";
    os << "<text x=\"" << w - mr + 10 << "\" y=\"" << mt + 16 + 18 * static_cast<double>(s)
       << "\" font-size=\"12\" fill=\"" << color << "\">" << series[s].label << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace lrspin
