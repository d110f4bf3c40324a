#include "enttemp/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace enttemp::report {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);  // folds -0 into 0
  return buf;
}

namespace {

double ratio(double e, double s) { return s > 0.0 ? e / s : std::numeric_limits<double>::quiet_NaN(); }

// JSON has no NaN; missing temperatures become null.
nlohmann::json number_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

}  // namespace

void write_points_csv(std::ostream& os, const std::vector<method3::TradeoffPoint>& points) {
  os << "sample,move_seq_digest,delta_s_bits,delta_e,t_ent\n";
  for (const auto& p : points)
    os << p.sample << ',' << p.move_digest << ',' << format_number(p.delta_s) << ',' << format_number(p.delta_e)
       << ',' << format_number(ratio(p.delta_e, p.delta_s)) << '\n';
}

void write_temperature_csv(std::ostream& os, const method3::TemperatureCurve& curve) {
  os << "delta_s_bits,delta_e,t_ent\n";
  for (const auto& p : curve.points)
    os << format_number(p.delta_s) << ',' << format_number(p.delta_e) << ',' << format_number(p.t_ent) << '\n';
}

void write_rank_csv(std::ostream& os, const std::vector<oneshot::RankResult>& sweep) {
  os << "chi,delta_s0_bits,delta_e\n";
  for (const auto& r : sweep) os << r.chi << ',' << format_number(r.delta_s0) << ',' << format_number(r.delta_e) << '\n';
}

void write_scaling_csv(std::ostream& os, const std::vector<oracles::ScalingPoint>& curve) {
  os << "delta_s_bits,delta_e,t_ent\n";
  for (const auto& p : curve)
    os << format_number(p.delta_s) << ',' << format_number(p.delta_e) << ',' << format_number(p.t_ent) << '\n';
}

nlohmann::json points_json(const std::vector<method3::TradeoffPoint>& points) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& p : points)
    out.push_back({{"sample", p.sample},
                   {"move_seq_digest", p.move_digest},
                   {"delta_s_bits", p.delta_s},
                   {"delta_e", p.delta_e},
                   {"t_ent", number_or_null(ratio(p.delta_e, p.delta_s))}});
  return out;
}

nlohmann::json temperature_json(const method3::TemperatureCurve& curve) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : curve.points)
    pts.push_back({{"delta_s_bits", p.delta_s}, {"delta_e", p.delta_e}, {"t_ent", number_or_null(p.t_ent)}});
  return {{"points", pts}, {"excluded", curve.excluded}};
}

nlohmann::json rank_json(const std::vector<oneshot::RankResult>& sweep) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : sweep)
    out.push_back({{"chi", r.chi}, {"delta_s0_bits", r.delta_s0}, {"delta_e", r.delta_e}, {"converged", r.converged}});
  return out;
}

nlohmann::json scaling_json(const std::vector<oracles::ScalingPoint>& curve) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& p : curve)
    out.push_back({{"delta_s_bits", p.delta_s}, {"delta_e", p.delta_e}, {"t_ent", number_or_null(p.t_ent)}});
  return out;
}

namespace {

constexpr double kWidth = 640;
constexpr double kHeight = 440;
constexpr double kLeft = 80;
constexpr double kRight = 150;
constexpr double kTop = 40;
constexpr double kBottom = 60;
constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};

struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  bool log = false;

  double map(double v) const { return log ? std::log10(v) : v; }
  double unit(double v) const { return (map(v) - lo) / (hi - lo); }
};

Axis fit_axis(const std::vector<SvgSeries>& series, bool use_x, bool log) {
  Axis a;
  a.log = log;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& s : series)
    for (double v : use_x ? s.x : s.y) {
      if (!std::isfinite(v) || (log && v <= 0.0)) continue;
      lo = std::min(lo, a.map(v));
      hi = std::max(hi, a.map(v));
    }
  if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
  if (hi - lo < 1e-12) lo -= 0.5, hi += 0.5;
  const double pad = 0.04 * (hi - lo);
  a.lo = lo - pad;
  a.hi = hi + pad;
  return a;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

std::string tick_label(double mapped, bool log) {
  char buf[32];
  if (log) std::snprintf(buf, sizeof buf, "1e%g", mapped);
  else std::snprintf(buf, sizeof buf, "%.3g", mapped);
  return buf;
}

}  // namespace

void write_svg(std::ostream& os, const SvgAxes& axes, const std::vector<SvgSeries>& series) {
  const Axis ax = fit_axis(series, true, axes.log_x);
  const Axis ay = fit_axis(series, false, axes.log_y);
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double v) { return kLeft + ax.unit(v) * pw; };
  auto py = [&](double v) { return kTop + (1.0 - ay.unit(v)) * ph; };
  auto fmt = [](double v) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return std::string(buf);
  };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(axes.title)
     << "</text>\n";
  os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int i = 0; i <= 4; ++i) {
    const double fx = ax.lo + (ax.hi - ax.lo) * i / 4.0;
    const double fy = ay.lo + (ay.hi - ay.lo) * i / 4.0;
    const double x = kLeft + pw * i / 4.0;
    const double y = kTop + ph * (1.0 - i / 4.0);
    os << "<text x=\"" << fmt(x) << "\" y=\"" << kTop + ph + 18 << "\" text-anchor=\"middle\">"
       << tick_label(fx, ax.log) << "</text>\n";
    os << "<text x=\"" << kLeft - 6 << "\" y=\"" << fmt(y + 4) << "\" text-anchor=\"end\">" << tick_label(fy, ay.log)
       << "</text>\n";
  }
  os << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 15 << "\" text-anchor=\"middle\">"
     << escape(axes.x_label) << "</text>\n";
  os << "<text transform=\"translate(18," << kTop + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
     << escape(axes.y_label) << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kColors[k % std::size(kColors)];
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      const double x = s.x[i];
      const double y = s.y[i];
      if (!std::isfinite(x) || !std::isfinite(y) || (axes.log_x && x <= 0.0) || (axes.log_y && y <= 0.0)) continue;
      pts.emplace_back(px(x), py(y));
    }
    if (s.connect) {
      os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
      for (const auto& [x, y] : pts) os << fmt(x) << ',' << fmt(y) << ' ';
      os << "\"/>\n";
    } else {
      for (const auto& [x, y] : pts)
        os << "<circle cx=\"" << fmt(x) << "\" cy=\"" << fmt(y) << "\" r=\"2\" fill=\"" << color << "\"/>\n";
    }
    const double ly = kTop + 14 + 18 * static_cast<double>(k);
    os << "<rect x=\"" << kWidth - kRight + 12 << "\" y=\"" << ly - 9 << "\" width=\"10\" height=\"10\" fill=\""
       << color << "\"/>\n";
    os << "<text x=\"" << kWidth - kRight + 28 << "\" y=\"" << ly << "\">" << escape(s.label) << "</text>\n";
  }
  os << "</svg>\n";
}

}  // namespace enttemp::report
