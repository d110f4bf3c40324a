#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "enttemp/method3.hpp"
#include "enttemp/oneshot.hpp"
#include "enttemp/oracles.hpp"
#include "json.hpp"

// Serialization of run artifacts. CSV floats carry 12 significant digits.
namespace enttemp::report {

std::string format_number(double v);

void write_points_csv(std::ostream& os, const std::vector<method3::TradeoffPoint>& points);
void write_temperature_csv(std::ostream& os, const method3::TemperatureCurve& curve);
void write_rank_csv(std::ostream& os, const std::vector<oneshot::RankResult>& sweep);
void write_scaling_csv(std::ostream& os, const std::vector<oracles::ScalingPoint>& curve);

nlohmann::json points_json(const std::vector<method3::TradeoffPoint>& points);
nlohmann::json temperature_json(const method3::TemperatureCurve& curve);
nlohmann::json rank_json(const std::vector<oneshot::RankResult>& sweep);
nlohmann::json scaling_json(const std::vector<oracles::ScalingPoint>& curve);

struct SvgSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool connect = false;  // polyline instead of markers
};

struct SvgAxes {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
};

/// Standalone SVG scatter/line plot. Nonpositive values are skipped on log axes.
void write_svg(std::ostream& os, const SvgAxes& axes, const std::vector<SvgSeries>& series);

}  // namespace enttemp::report
