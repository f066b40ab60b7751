#include "fgclock/table_io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include <json.hpp>

namespace fgclock {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) {
    while (!field.empty() && (field.back() == '\r' || field.back() == ' '))
      field.pop_back();
    while (!field.empty() && field.front() == ' ') field.erase(0, 1);
    out.push_back(field);
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& text, std::size_t line_no,
                    const std::string& column) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
    throw ParseError("line " + std::to_string(line_no) + ": column " + column +
                     " is not a finite number ('" + text + "')");
  }
  return value;
}

nlohmann::json number_or_null(double x) {
  if (std::isnan(x)) return nullptr;
  return x;
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return {};
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

void write_observations_csv(std::ostream& os, const ObservationSeries& obs) {
  os << "k,U,V\n";
  for (std::size_t k = 0; k < obs.u.size(); ++k) {
    os << (k + 1) << ',' << format_double(obs.u[k]) << ','
       << format_double(obs.v[k]) << '\n';
  }
}

void write_path_csv(std::ostream& os, const LatentPath& path) {
  os << "k,xi,psi,theta,d\n";
  for (std::size_t k = 0; k < path.xi.size(); ++k) {
    os << k << ',' << format_double(path.xi[k]) << ','
       << format_double(path.psi[k]) << ',' << format_double(path.theta(k))
       << ',' << format_double(path.delay(k)) << '\n';
  }
}

ObservationSeries read_observations_csv(std::istream& is) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    header = split_fields(line);
    break;
  }
  if (header.empty()) throw ParseError("input is empty; expected header k,U,V");

  std::ptrdiff_t col_k = -1, col_u = -1, col_v = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "k") col_k = static_cast<std::ptrdiff_t>(i);
    if (header[i] == "U") col_u = static_cast<std::ptrdiff_t>(i);
    if (header[i] == "V") col_v = static_cast<std::ptrdiff_t>(i);
  }
  if (col_k < 0 || col_u < 0 || col_v < 0) {
    throw ParseError("line " + std::to_string(line_no) +
                     ": header must contain columns k, U and V");
  }

  ObservationSeries obs;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = split_fields(line);
    if (fields.size() != header.size()) {
      throw ParseError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(header.size()) + " fields, got " +
                       std::to_string(fields.size()));
    }
    const double k = parse_number(fields[col_k], line_no, "k");
    if (k != static_cast<double>(obs.u.size() + 1)) {
      throw ParseError("line " + std::to_string(line_no) + ": expected k = " +
                       std::to_string(obs.u.size() + 1));
    }
    obs.u.push_back(parse_number(fields[col_u], line_no, "U"));
    obs.v.push_back(parse_number(fields[col_v], line_no, "V"));
  }
  if (obs.u.empty()) throw ParseError("input has a header but no rows");
  return obs;
}

void write_mse_csv(std::ostream& os, const MseTable& table) {
  os << "axis,estimator,mse,stderr,trials\n";
  for (const auto& row : table.rows) {
    os << format_double(row.axis) << ',' << to_string(row.estimator) << ','
       << format_double(row.mse) << ',' << format_double(row.std_error) << ','
       << row.trials << '\n';
  }
}

std::string mse_to_json(const MseTable& table, int indent) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json r = {
        {"axis", row.axis},
        {"estimator", std::string(to_string(row.estimator))},
        {"mse", number_or_null(row.mse)},
        {"stderr", number_or_null(row.std_error)},
        {"trials", row.trials},
    };
    if (!row.ok()) r["error"] = row.error;
    rows.push_back(std::move(r));
  }
  nlohmann::json doc = {{"axis", std::string(to_string(table.axis))},
                        {"rows", std::move(rows)}};
  return doc.dump(indent);
}

}  // namespace fgclock
