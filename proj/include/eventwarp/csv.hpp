#pragma once

#include <optional>
#include <string>
#include <vector>

#include "eventwarp/event_curve.hpp"

namespace eventwarp::csv {

/// Shortest decimal representation that round-trips the double ('.' decimal
/// separator, locale independent).
std::string format_double(double value);

struct EventRow {
  std::string curve_id;
  double event_time = 0.0;
  std::optional<double> value;
};

/// Reads `curve_id,event_time[,value]` rows. The header is required.
std::vector<EventRow> read_events(const std::string& path);

/// Groups rows into curves in order of first appearance.
std::vector<EventCurve> curves_from_rows(const std::vector<EventRow>& rows, const Domain& domain,
                                         CurveMode mode);

/// Reads `curve_id,event_time,h_inv` rows into per-curve warping samples.
struct WarpingRow {
  std::string curve_id;
  double event_time = 0.0;
  double h_inv = 0.0;
};
std::vector<WarpingRow> read_warpings(const std::string& path);

void write_lines(const std::string& path, const std::vector<std::string>& lines);

}  // namespace eventwarp::csv
