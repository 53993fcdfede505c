#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "kfks/diagnostics.hpp"

namespace kfks {

/// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Comma separated, header row, LF line endings. Fields are not quoted.
void write_csv(std::ostream& os, const CsvTable& table);
void write_csv_file(const std::string& path, const CsvTable& table);

/// Parses what write_csv emits. DomainError on ragged rows.
CsvTable read_csv(std::istream& is);
CsvTable read_csv_file(const std::string& path);

/// Column `name` parsed as doubles.
std::vector<double> numeric_column(const CsvTable& table, const std::string& name);

// columns: x, rho, u, T, raw_second_moment
CsvTable profile_table(const Profile& p);

// columns: scheme, n_cells, n_velocities, nu, n_cycles, wall_time, time_per_cycle, time_per_cell
CsvTable metrics_table(const std::vector<RunMetrics>& runs);

struct ConvergenceRow {
  std::string scheme;
  std::size_t m_coarse = 0;
  std::size_t m_mid = 0;
  std::size_t m_fine = 0;
  double nu = 0.0;
  ConvergenceEstimate estimate;
};

// columns: scheme, m_coarse, m_mid, m_fine, nu, order, coarse_diff, fine_diff
CsvTable convergence_table(const std::vector<ConvergenceRow>& rows);

}  // namespace kfks
