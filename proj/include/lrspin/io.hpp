#pragma once

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "lrspin/analysis.hpp"
#include "lrspin/evolution.hpp"

namespace lrspin {

/// Ordered key=value pairs echoed into every output artifact.
using Metadata = std::vector<std::pair<std::string, std::string>>;

inline constexpr int kSchemaVersion = 1;

/// Shortest exact decimal for a double (17 significant digits).
std::string format_g17(double x);

/// '#'-prefixed metadata lines, a column header row, then comma-separated data.
std::string table_csv(const Metadata& meta, const std::vector<std::string>& headers,
                      const std::vector<const std::vector<double>*>& columns);

std::string series_csv(const TimeSeries& series, const Metadata& meta);

nlohmann::json metadata_json(const Metadata& meta);
nlohmann::json series_json(const TimeSeries& series, const Metadata& meta);
TimeSeries series_from_json(const nlohmann::json& doc);

nlohmann::json report_json(const EquilibrationReport& report, const Metadata& meta);
std::string report_lnln_csv(const EquilibrationReport& report, const Metadata& meta);

void write_text_file(const std::string& path, const std::string& content);

/// One polyline of a chart.
struct SvgSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Minimal standalone SVG line chart (no external tooling required).
std::string svg_line_chart(const std::string& title, const std::string& x_label,
                           const std::string& y_label, const std::vector<SvgSeries>& series,
                           bool log_x = false);

}  // namespace lrspin
