#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pxflow/diagnostics.hpp"

namespace pxflow {

inline constexpr std::array<std::string_view, 10> kCsvColumns{
    "t", "l2", "h1_semi", "h2_semi", "I_p", "J_p", "g_mass", "low_ball_energy", "split_radius", "kinetic_flux"};

/// %.17g, so values round-trip exactly.
std::string format_double(double v);

void write_csv_header(std::ostream& os);
void write_csv_row(std::ostream& os, const NormSample& s);
void write_csv(std::ostream& os, const std::vector<NormSample>& samples);

/// Generic numeric CSV with a header row.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::optional<std::size_t> find(std::string_view name) const;
  /// Throws InvalidArgument naming the missing column.
  std::vector<double> column(std::string_view name) const;
};

/// Throws Error on unreadable files and InvalidArgument on malformed rows.
CsvTable read_csv_table(const std::string& path);
CsvTable parse_csv_table(std::istream& is, const std::string& origin = "<stream>");

/// Requires every column of kCsvColumns.
std::vector<NormSample> samples_from_table(const CsvTable& table);

}  // namespace pxflow
