#pragma once

// Canonical JSON/CSV serialization of run summaries and deterministic SVG charts.

#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "specdec/experiments.hpp"

namespace specdec {

struct OutputFormats {
  bool json = true;
  bool csv = true;
  bool svg = false;
};

/// Parses a comma-separated subset of {json, csv, svg}.
OutputFormats parse_formats(std::string_view text);

struct EmitOptions {
  bool events = false;   // JSON lines of every resolved access
  bool timings = false;  // wall-clock training times (not reproducible)
};

/// Mean metrics per method and K over repetitions.
struct SeriesPoint {
  std::size_t K = 0;
  double p_collision = 0.0;
  double d_e = 0.0;
  std::size_t reps = 0;
};
std::map<std::string, std::vector<SeriesPoint>> decision_series(const std::vector<DecisionRow>& rows);

nlohmann::json summary_to_json(const RunSummary& summary);

void write_prediction_csv(std::ostream& out, const std::vector<PredictionRow>& rows);
void write_decision_csv(std::ostream& out, const std::vector<DecisionRow>& rows);
void write_curve_csv(std::ostream& out, const std::vector<CurvePoint>& points);
void write_timings_csv(std::ostream& out, const std::vector<TimingRow>& rows);

using Polyline = std::vector<std::pair<double, double>>;

/// Line chart with one polyline per named series; fixed 640x400 viewport.
std::string line_chart_svg(std::string_view title, std::string_view x_label, std::string_view y_label,
                           const std::map<std::string, Polyline>& series);

/// Vertical bars, one per label, in the given order.
std::string bar_chart_svg(std::string_view title, std::string_view y_label,
                          const std::vector<std::pair<std::string, double>>& bars);

/// File stem shared by every output of a run: `<scenario>_seed<seed>`.
std::string output_stem(const RunSummary& summary);

/// Writes the requested files into `dir` (created when missing) and returns
/// their paths in write order. Throws IoError naming the path on failure.
std::vector<std::filesystem::path> emit_outputs(const RunSummary& summary, const OutputFormats& formats,
                                                const std::filesystem::path& dir, const EmitOptions& options = {});

}  // namespace specdec
