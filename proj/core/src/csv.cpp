#include "pxflow/csv.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "pxflow/error.hpp"

namespace pxflow {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv_header(std::ostream& os) {
  for (std::size_t i = 0; i < kCsvColumns.size(); ++i) os << (i ? "," : "") << kCsvColumns[i];
  os << '\n';
}

void write_csv_row(std::ostream& os, const NormSample& s) {
  const double v[] = {s.t,   s.l2,     s.h1_semi,         s.h2_semi,      s.I_p,
                      s.J_p, s.g_mass, s.low_ball_energy, s.split_radius, s.kinetic_flux};
  for (std::size_t i = 0; i < std::size(v); ++i) os << (i ? "," : "") << format_double(v[i]);
  os << '\n';
}

void write_csv(std::ostream& os, const std::vector<NormSample>& samples) {
  write_csv_header(os);
  for (const auto& s : samples) write_csv_row(os, s);
}

std::optional<std::size_t> CsvTable::find(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  return std::nullopt;
}

std::vector<double> CsvTable::column(std::string_view name) const {
  const auto idx = find(name);
  if (!idx) throw InvalidArgument("CSV is missing column '" + std::string(name) + "'");
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[*idx]);
  return out;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string{} : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

CsvTable parse_csv_table(std::istream& is, const std::string& origin) {
  CsvTable t;
  std::string line;
  if (!std::getline(is, line)) throw InvalidArgument(origin + ": empty CSV");
  t.header = split_line(line);
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split_line(line);
    if (cells.size() != t.header.size()) {
      throw InvalidArgument(origin + ": row " + std::to_string(lineno) + " has " + std::to_string(cells.size()) +
                            " cells, header has " + std::to_string(t.header.size()));
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(c, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != c.size()) {
        throw InvalidArgument(origin + ": row " + std::to_string(lineno) + ": '" + c + "' is not a number");
      }
      row.push_back(v);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

CsvTable read_csv_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open CSV file '" + path + "'");
  return parse_csv_table(in, path);
}

std::vector<NormSample> samples_from_table(const CsvTable& table) {
  std::array<std::vector<double>, kCsvColumns.size()> cols;
  for (std::size_t i = 0; i < kCsvColumns.size(); ++i) cols[i] = table.column(kCsvColumns[i]);
  std::vector<NormSample> out(table.rows.size());
  for (std::size_t r = 0; r < out.size(); ++r) {
    auto& s = out[r];
    s.t = cols[0][r];
    s.l2 = cols[1][r];
    s.h1_semi = cols[2][r];
    s.h2_semi = cols[3][r];
    s.I_p = cols[4][r];
    s.J_p = cols[5][r];
    s.g_mass = cols[6][r];
    s.low_ball_energy = cols[7][r];
    s.split_radius = cols[8][r];
    s.kinetic_flux = cols[9][r];
  }
  return out;
}

}  // namespace pxflow
