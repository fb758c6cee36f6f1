#include "specdec/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "specdec/errors.hpp"

namespace specdec {
namespace {

using nlohmann::json;

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string optional_text(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

json prediction_json(const PredictionRow& row) {
  const auto& m = row.metrics;
  return json{{"method", row.method},
              {"rep", row.rep},
              {"seed", row.seed},
              {"true_busy", m.counts.true_busy},
              {"false_busy", m.counts.false_busy},
              {"true_idle", m.counts.true_idle},
              {"false_idle", m.counts.false_idle},
              {"p_d", optional_json(m.p_d)},
              {"p_fa", optional_json(m.p_fa)},
              {"accuracy", m.accuracy},
              {"mse", optional_json(m.mse)},
              {"near_transition", optional_json(row.near_transition)}};
}

json decision_json(const DecisionRow& row) {
  const auto& m = row.metrics;
  return json{{"method", row.method},      {"K", row.K},
              {"rep", row.rep},            {"seed", row.seed},
              {"n_total", m.n_total},      {"n_collision", m.n_collision},
              {"d_success", m.d_success},  {"n_requests", m.n_requests},
              {"n_abandoned", m.n_abandoned}, {"p_collision", m.p_collision},
              {"d_e", m.d_e}};
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape_xml(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

constexpr double kWidth = 640, kHeight = 400, kLeft = 70, kRight = 150, kTop = 40, kBottom = 50;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string svg_open(std::string_view title) {
  std::ostringstream s;
  s << R"(<svg xmlns="http://www.w3.org/2000/svg" width=")" << kWidth << R"(" height=")" << kHeight
    << R"(" viewBox="0 0 )" << kWidth << ' ' << kHeight << R"(" font-family="sans-serif" font-size="12">)" << '\n'
    << R"(<rect width="100%" height="100%" fill="white"/>)" << '\n'
    << R"(<text x=")" << fixed(kWidth / 2) << R"(" y="20" text-anchor="middle" font-size="14">)" << escape_xml(title)
    << "</text>\n";
  return s.str();
}

struct Range {
  double lo = 0, hi = 1;
  void widen() {
    if (hi - lo < 1e-12) {
      lo -= 0.5;
      hi += 0.5;
    }
  }
};

std::string axes(const Range& x, const Range& y, std::string_view x_label, std::string_view y_label) {
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
  std::ostringstream s;
  s << R"(<line x1=")" << fixed(x0) << R"(" y1=")" << fixed(y0) << R"(" x2=")" << fixed(x1) << R"(" y2=")"
    << fixed(y0) << R"(" stroke="black"/>)" << '\n';
  s << R"(<line x1=")" << fixed(x0) << R"(" y1=")" << fixed(y0) << R"(" x2=")" << fixed(x0) << R"(" y2=")"
    << fixed(y1) << R"(" stroke="black"/>)" << '\n';
  for (int i = 0; i <= 4; ++i) {
    const double f = i / 4.0;
    const double px = x0 + f * (x1 - x0), py = y0 - f * (y0 - y1);
    s << R"(<text x=")" << fixed(px) << R"(" y=")" << fixed(y0 + 16) << R"(" text-anchor="middle">)"
      << fixed(x.lo + f * (x.hi - x.lo)) << "</text>\n";
    s << R"(<text x=")" << fixed(x0 - 6) << R"(" y=")" << fixed(py + 4) << R"(" text-anchor="end">)"
      << fixed(y.lo + f * (y.hi - y.lo)) << "</text>\n";
  }
  s << R"(<text x=")" << fixed((x0 + x1) / 2) << R"(" y=")" << fixed(kHeight - 12) << R"(" text-anchor="middle">)"
    << escape_xml(x_label) << "</text>\n";
  s << R"(<text x="16" y=")" << fixed((y0 + y1) / 2) << R"(" text-anchor="middle" transform="rotate(-90 16 )"
    << fixed((y0 + y1) / 2) << R"lit()">)lit" << escape_xml(y_label) << "</text>\n";
  return s.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

template <class Fn>
std::string to_string_via(Fn&& fn) {
  std::ostringstream s;
  fn(s);
  return s.str();
}

}  // namespace

OutputFormats parse_formats(std::string_view text) {
  OutputFormats f{false, false, false};
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    std::string_view item = text.substr(pos, comma - pos);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (item == "json") f.json = true;
    else if (item == "csv") f.csv = true;
    else if (item == "svg") f.svg = true;
    else throw ConfigError("unknown output format '" + std::string(item) + "'");
    pos = comma + 1;
  }
  return f;
}

std::map<std::string, std::vector<SeriesPoint>> decision_series(const std::vector<DecisionRow>& rows) {
  std::map<std::string, std::map<std::size_t, SeriesPoint>> acc;
  for (const auto& row : rows) {
    SeriesPoint& p = acc[row.method][row.K];
    p.K = row.K;
    p.p_collision += row.metrics.p_collision;
    p.d_e += row.metrics.d_e;
    ++p.reps;
  }
  std::map<std::string, std::vector<SeriesPoint>> out;
  for (auto& [method, by_k] : acc) {
    for (auto& [k, p] : by_k) {
      p.p_collision /= static_cast<double>(p.reps);
      p.d_e /= static_cast<double>(p.reps);
      out[method].push_back(p);
    }
  }
  return out;
}

json summary_to_json(const RunSummary& summary) {
  json config = json::object();
  for (const auto& [key, value] : summary.config.to_key_values()) config[key] = value;
  json prediction = json::array();
  for (const auto& row : summary.prediction) prediction.push_back(prediction_json(row));
  json decision = json::array();
  for (const auto& row : summary.decision) decision.push_back(decision_json(row));
  json curve = json::array();
  for (const auto& p : summary.mse_curve)
    curve.push_back({{"window", p.window}, {"rep", p.rep}, {"elm_mse", p.elm_mse}, {"bp_mse", p.bp_mse}});
  json series = json::object();
  for (const auto& [method, points] : decision_series(summary.decision)) {
    json list = json::array();
    for (const auto& p : points)
      list.push_back({{"K", p.K}, {"p_collision", p.p_collision}, {"d_e", p.d_e}, {"reps", p.reps}});
    series[method] = std::move(list);
  }
  return json{{"scenario", std::string(to_string(summary.config.scenario))},
              {"config", std::move(config)},
              {"seeds", summary.seeds},
              {"prediction", std::move(prediction)},
              {"decision", std::move(decision)},
              {"mse_curve", std::move(curve)},
              {"series", std::move(series)}};
}

void write_prediction_csv(std::ostream& out, const std::vector<PredictionRow>& rows) {
  out << "method,rep,seed,true_busy,false_busy,true_idle,false_idle,p_d,p_fa,accuracy,mse,near_transition\n";
  for (const auto& r : rows) {
    const auto& m = r.metrics;
    out << r.method << ',' << r.rep << ',' << r.seed << ',' << m.counts.true_busy << ',' << m.counts.false_busy
        << ',' << m.counts.true_idle << ',' << m.counts.false_idle << ',' << optional_text(m.p_d) << ','
        << optional_text(m.p_fa) << ',' << format_double(m.accuracy) << ',' << optional_text(m.mse) << ','
        << optional_text(r.near_transition) << '\n';
  }
}

void write_decision_csv(std::ostream& out, const std::vector<DecisionRow>& rows) {
  out << "method,K,rep,seed,n_total,n_collision,d_success,n_requests,n_abandoned,p_collision,d_e\n";
  for (const auto& r : rows) {
    const auto& m = r.metrics;
    out << r.method << ',' << r.K << ',' << r.rep << ',' << r.seed << ',' << m.n_total << ',' << m.n_collision
        << ',' << m.d_success << ',' << m.n_requests << ',' << m.n_abandoned << ',' << format_double(m.p_collision)
        << ',' << format_double(m.d_e) << '\n';
  }
}

void write_curve_csv(std::ostream& out, const std::vector<CurvePoint>& points) {
  out << "window,rep,elm_mse,bp_mse\n";
  for (const auto& p : points)
    out << p.window << ',' << p.rep << ',' << format_double(p.elm_mse) << ',' << format_double(p.bp_mse) << '\n';
}

void write_timings_csv(std::ostream& out, const std::vector<TimingRow>& rows) {
  out << "rep,elm_seconds,bp_seconds,i_speed,d_time\n";
  for (const auto& r : rows) {
    out << r.rep << ',' << format_double(r.times.elm_seconds) << ',' << format_double(r.times.bp_seconds) << ',';
    if (r.times.bp_seconds > 0.0)
      out << format_double(speed_increase_percent(r.times)) << ',' << format_double(time_ratio(r.times));
    else
      out << ',';
    out << '\n';
  }
}

std::string line_chart_svg(std::string_view title, std::string_view x_label, std::string_view y_label,
                           const std::map<std::string, Polyline>& series) {
  Range x{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  Range y{0.0, -std::numeric_limits<double>::infinity()};
  for (const auto& [name, line] : series)
    for (const auto& [px, py] : line) {
      x.lo = std::min(x.lo, px);
      x.hi = std::max(x.hi, px);
      y.lo = std::min(y.lo, py);
      y.hi = std::max(y.hi, py);
    }
  if (!std::isfinite(x.lo)) x = {0.0, 1.0};
  if (!std::isfinite(y.hi)) y = {0.0, 1.0};
  x.widen();
  y.widen();
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
  auto px_of = [&](double v) { return x0 + (v - x.lo) / (x.hi - x.lo) * (x1 - x0); };
  auto py_of = [&](double v) { return y0 - (v - y.lo) / (y.hi - y.lo) * (y0 - y1); };

  std::string svg = svg_open(title) + axes(x, y, x_label, y_label);
  std::size_t k = 0;
  for (const auto& [name, line] : series) {
    const char* colour = kPalette[k % std::size(kPalette)];
    std::string points;
    for (const auto& [vx, vy] : line) {
      if (!points.empty()) points += ' ';
      points += fixed(px_of(vx)) + ',' + fixed(py_of(vy));
    }
    svg += R"(<polyline fill="none" stroke=")" + std::string(colour) + R"(" stroke-width="2" points=")" + points +
           "\"/>\n";
    const double ly = kTop + 20.0 * static_cast<double>(k);
    svg += R"(<text x=")" + fixed(x1 + 12) + R"(" y=")" + fixed(ly + 4) + R"(" fill=")" + colour + "\">" +
           escape_xml(name) + "</text>\n";
    ++k;
  }
  return svg + "</svg>\n";
}

std::string bar_chart_svg(std::string_view title, std::string_view y_label,
                          const std::vector<std::pair<std::string, double>>& bars) {
  Range y{0.0, 0.0};
  for (const auto& [name, v] : bars) y.hi = std::max(y.hi, v);
  y.widen();
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
  std::string svg = svg_open(title) + axes(Range{0.0, static_cast<double>(bars.size())}, y, "", y_label);
  const double slot = (x1 - x0) / static_cast<double>(std::max<std::size_t>(bars.size(), 1));
  for (std::size_t i = 0; i < bars.size(); ++i) {
    const double h = (bars[i].second - y.lo) / (y.hi - y.lo) * (y0 - y1);
    const double left = x0 + slot * static_cast<double>(i) + slot * 0.15;
    svg += R"(<rect x=")" + fixed(left) + R"(" y=")" + fixed(y0 - h) + R"(" width=")" + fixed(slot * 0.7) +
           R"(" height=")" + fixed(h) + R"(" fill=")" + kPalette[i % std::size(kPalette)] + "\"/>\n";
    svg += R"(<text x=")" + fixed(left + slot * 0.35) + R"(" y=")" + fixed(y0 - h - 4) +
           R"(" text-anchor="middle" font-size="10">)" + escape_xml(bars[i].first) + "</text>\n";
  }
  return svg + "</svg>\n";
}

std::string output_stem(const RunSummary& summary) {
  return std::string(to_string(summary.config.scenario)) + "_seed" + std::to_string(summary.config.seed);
}

std::vector<std::filesystem::path> emit_outputs(const RunSummary& summary, const OutputFormats& formats,
                                                const std::filesystem::path& dir, const EmitOptions& options) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  const std::string stem = output_stem(summary);
  std::vector<std::filesystem::path> written;
  auto emit = [&](const std::string& suffix, const std::string& content) {
    const auto path = dir / (stem + suffix);
    write_file(path, content);
    written.push_back(path);
  };

  if (formats.json) emit(".json", summary_to_json(summary).dump(2) + "\n");
  if (formats.csv) {
    if (!summary.decision.empty())
      emit(".csv", to_string_via([&](std::ostream& s) { write_decision_csv(s, summary.decision); }));
    else
      emit(".csv", to_string_via([&](std::ostream& s) { write_prediction_csv(s, summary.prediction); }));
    if (!summary.mse_curve.empty())
      emit("_mse_curve.csv", to_string_via([&](std::ostream& s) { write_curve_csv(s, summary.mse_curve); }));
  }
  if (formats.svg) {
    const auto series = decision_series(summary.decision);
    if (!series.empty()) {
      std::map<std::string, Polyline> collision, success;
      for (const auto& [method, points] : series)
        for (const auto& p : points) {
          collision[method].emplace_back(static_cast<double>(p.K), p.p_collision);
          success[method].emplace_back(static_cast<double>(p.K), p.d_e);
        }
      emit("_p_collision.svg", line_chart_svg("Collision probability", "K (slots)", "P_collision", collision));
      emit("_d_e.svg", line_chart_svg("Successful transmissions", "K (slots)", "D_e", success));
    }
    if (!summary.mse_curve.empty()) {
      std::map<std::size_t, std::pair<double, double>> sums;
      std::map<std::size_t, std::size_t> counts;
      for (const auto& p : summary.mse_curve) {
        sums[p.window].first += p.elm_mse;
        sums[p.window].second += p.bp_mse;
        ++counts[p.window];
      }
      std::map<std::string, Polyline> curve;
      for (const auto& [w, s] : sums) {
        const double c = static_cast<double>(counts[w]);
        curve["elm"].emplace_back(static_cast<double>(w), s.first / c);
        curve["bp"].emplace_back(static_cast<double>(w), s.second / c);
      }
      emit("_mse_curve.svg", line_chart_svg("Test MSE by input-layer size", "input nodes", "MSE", curve));
    }
    if (!summary.prediction.empty()) {
      std::vector<std::pair<std::string, double>> bars;
      std::map<std::string, std::pair<double, std::size_t>> acc;
      for (const auto& row : summary.prediction) {
        if (!acc.count(row.method)) bars.emplace_back(row.method, 0.0);
        acc[row.method].first += row.metrics.accuracy;
        ++acc[row.method].second;
      }
      for (auto& [name, v] : bars) v = acc[name].first / static_cast<double>(acc[name].second);
      emit("_accuracy.svg", bar_chart_svg("Mean accuracy", "accuracy", bars));
    }
  }
  if (options.events && !summary.events.empty()) {
    std::string lines;
    for (const auto& e : summary.events) lines += e + "\n";
    emit("_events.jsonl", lines);
  }
  if (options.timings && !summary.timings.empty())
    emit("_timings.csv", to_string_via([&](std::ostream& s) { write_timings_csv(s, summary.timings); }));
  return written;
}

}  // namespace specdec
