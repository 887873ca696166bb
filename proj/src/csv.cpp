#include "eventwarp/csv.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace eventwarp::csv {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) {
    while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
    std::size_t start = 0;
    while (start < field.size() && field[start] == ' ') ++start;
    fields.push_back(field.substr(start));
  }
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_double(const std::string& text, const std::string& path, std::size_t line_no) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw Error(Errc::io_error, path + ":" + std::to_string(line_no) + ": bad number '" + text + "'");
  return v;
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot open '" + path + "'");
  return in;
}

bool header_matches(const std::vector<std::string>& fields, const char* a, const char* b) {
  return fields.size() >= 2 && fields[0] == a && fields[1] == b;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) throw Error(Errc::io_error, "number formatting failed");
  return std::string(buf, ptr);
}

std::vector<EventRow> read_events(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line))
    throw Error(Errc::io_error, path + ": empty file, expected a header row");
  ++line_no;
  const auto header = split_line(line);
  if (!header_matches(header, "curve_id", "event_time"))
    throw Error(Errc::io_error, path + ": expected header 'curve_id,event_time[,value]'");
  const bool has_value = header.size() >= 3 && header[2] == "value";

  std::vector<EventRow> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_line(line);
    if (fields.size() < 2)
      throw Error(Errc::io_error, path + ":" + std::to_string(line_no) + ": expected 2+ fields");
    EventRow row;
    row.curve_id = fields[0];
    row.event_time = parse_double(fields[1], path, line_no);
    if (has_value && fields.size() >= 3 && !fields[2].empty())
      row.value = parse_double(fields[2], path, line_no);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<EventCurve> curves_from_rows(const std::vector<EventRow>& rows, const Domain& domain,
                                         CurveMode mode) {
  std::vector<std::string> order;
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> grouped;
  bool any_value = false;
  for (const EventRow& row : rows) {
    auto [it, inserted] = grouped.try_emplace(row.curve_id);
    if (inserted) order.push_back(row.curve_id);
    it->second.first.push_back(row.event_time);
    if (row.value) {
      it->second.second.push_back(*row.value);
      any_value = true;
    }
  }
  std::vector<EventCurve> curves;
  curves.reserve(order.size());
  for (const std::string& id : order) {
    auto& [times, values] = grouped[id];
    if (any_value && values.size() != times.size())
      throw Error(Errc::io_error, "curve '" + id + "': value column must be filled for every row");
    curves.push_back(any_value ? build_curve_with_values(id, times, values, domain, mode)
                               : build_curve(id, times, domain, mode));
  }
  return curves;
}

std::vector<WarpingRow> read_warpings(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line))
    throw Error(Errc::io_error, path + ": empty file, expected a header row");
  ++line_no;
  if (!header_matches(split_line(line), "curve_id", "event_time"))
    throw Error(Errc::io_error, path + ": expected header 'curve_id,event_time,h_inv'");

  std::vector<WarpingRow> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_line(line);
    if (fields.size() < 3)
      throw Error(Errc::io_error, path + ":" + std::to_string(line_no) + ": expected 3 fields");
    rows.push_back({fields[0], parse_double(fields[1], path, line_no),
                    parse_double(fields[2], path, line_no)});
  }
  return rows;
}

void write_lines(const std::string& path, const std::vector<std::string>& lines) {
  std::ofstream out(path, std::ios::binary);  // fixed '\n' endings on every platform
  if (!out) throw Error(Errc::io_error, "cannot write '" + path + "'");
  for (const std::string& line : lines) out << line << '\n';
  if (!out) throw Error(Errc::io_error, "write failed for '" + path + "'");
}

}  // namespace eventwarp::csv
