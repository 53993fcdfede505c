#include "kfks/csv.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>

#include "kfks/error.hpp"

namespace kfks {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& os, const CsvTable& table) {
  auto line = [&os](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) os << ',';
      os << fields[i];
    }
    os << '\n';
  };
  line(table.header);
  for (const auto& row : table.rows) line(row);
}

void write_csv_file(const std::string& path, const CsvTable& table) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  write_csv(os, table);
  if (!os) throw std::runtime_error("failed writing " + path);
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

CsvTable read_csv(std::istream& is) {
  CsvTable t;
  std::string line;
  if (!std::getline(is, line)) throw DomainError("csv: empty input");
  t.header = split(line);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto row = split(line);
    if (row.size() != t.header.size()) throw DomainError("csv: ragged row");
    t.rows.push_back(std::move(row));
  }
  return t;
}

CsvTable read_csv_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  return read_csv(is);
}

std::vector<double> numeric_column(const CsvTable& table, const std::string& name) {
  std::size_t col = table.header.size();
  for (std::size_t i = 0; i < table.header.size(); ++i)
    if (table.header[i] == name) col = i;
  if (col == table.header.size()) throw DomainError("csv: no column " + name);
  std::vector<double> out;
  out.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    const std::string& s = row[col];
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
      throw DomainError("csv: bad number '" + s + "' in column " + name);
    out.push_back(v);
  }
  return out;
}

CsvTable profile_table(const Profile& p) {
  CsvTable t;
  t.header = {"x", "rho", "u", "T", "raw_second_moment"};
  t.rows.reserve(p.x.size());
  for (std::size_t j = 0; j < p.x.size(); ++j)
    t.rows.push_back({format_double(p.x[j]), format_double(p.rho[j]), format_double(p.u[j]),
                      format_double(p.temperature[j]), format_double(p.raw_second_moment[j])});
  return t;
}

CsvTable metrics_table(const std::vector<RunMetrics>& runs) {
  CsvTable t;
  t.header = {"scheme",    "n_cells",        "n_velocities", "nu",
              "n_cycles",  "wall_time",      "time_per_cycle", "time_per_cell"};
  for (const auto& m : runs)
    t.rows.push_back({m.scheme, std::to_string(m.n_cells), std::to_string(m.n_velocities),
                      format_double(m.nu), std::to_string(m.n_cycles), format_double(m.wall_time),
                      format_double(m.time_per_cycle), format_double(m.time_per_cell)});
  return t;
}

CsvTable convergence_table(const std::vector<ConvergenceRow>& rows) {
  CsvTable t;
  t.header = {"scheme", "m_coarse", "m_mid", "m_fine", "nu", "order", "coarse_diff", "fine_diff"};
  for (const auto& r : rows)
    t.rows.push_back({r.scheme, std::to_string(r.m_coarse), std::to_string(r.m_mid),
                      std::to_string(r.m_fine), format_double(r.nu),
                      format_double(r.estimate.order), format_double(r.estimate.coarse_diff),
                      format_double(r.estimate.fine_diff)});
  return t;
}

}  // namespace kfks
