#pragma once

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "logschro/error.hpp"
#include "logschro/graph.hpp"

namespace logschro::io {

/// Shortest decimal with 17 significant digits; round-trips every double.
inline std::string format_double(double v)
{
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(n));
}

namespace detail {

inline std::string_view trim(std::string_view s)
{
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split_csv(std::string_view line)
{
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos)
      break;
    start = comma + 1;
  }
  return out;
}

template <class T>
T parse_number(std::string_view text, int line, std::string_view column)
{
  T value{};
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end)
    throw ValidationError("line " + std::to_string(line) + ": cannot parse '" + std::string(text) +
                          "' in column '" + std::string(column) + "'");
  return value;
}

inline std::string column_name(int axis) { return "x" + std::to_string(axis); }

}  // namespace detail

/// Writes `index,value` rows, or `x0,...,x{N-1},value` rows when
/// `coordinate_form` is set (lattices only).
inline void write_field(std::ostream& os, const GraphTopology& g, const Field& u,
                        bool coordinate_form = false)
{
  logschro::detail::require_field(g, u, "field");
  if (coordinate_form && !g.is_lattice())
    throw ValidationError("coordinate form requires a lattice graph");
  const int dim = coordinate_form ? g.lattice()->dimension() : 0;
  if (coordinate_form)
    for (int a = 0; a < dim; ++a)
      os << detail::column_name(a) << ',';
  else
    os << "index,";
  os << "value\n";
  for (int x = 0; x < g.vertex_count(); ++x) {
    if (coordinate_form)
      for (int c : g.lattice()->coords_of(x))
        os << c << ',';
    else
      os << x << ',';
    os << format_double(u[x]) << '\n';
  }
}

/// Reads a field from CSV.  The header decides the layout: an `index` column,
/// or coordinate columns x0..x{N-1} on lattices; the value comes from the
/// `value` column, falling back to `u`.  Every vertex must appear exactly once.
inline Field read_field(std::istream& is, const GraphTopology& g)
{
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!detail::trim(line).empty())
      break;
  }
  if (detail::trim(line).empty())
    throw ValidationError("field file is empty");
  const std::string header_line = line;
  const auto header = detail::split_csv(header_line);

  auto find = [&](std::string_view name) -> int {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name)
        return static_cast<int>(i);
    return -1;
  };
  int value_col = find("value");
  if (value_col < 0)
    value_col = find("u");
  if (value_col < 0)
    throw ValidationError("line " + std::to_string(line_no) + ": header needs a 'value' or 'u' column");
  const int index_col = find("index");
  std::vector<int> coord_cols;
  if (index_col < 0) {
    if (!g.is_lattice())
      throw ValidationError("line " + std::to_string(line_no) +
                            ": header needs an 'index' column for a general graph");
    for (int a = 0; a < g.lattice()->dimension(); ++a) {
      const int c = find(detail::column_name(a));
      if (c < 0)
        throw ValidationError("line " + std::to_string(line_no) + ": header lacks 'index' and '" +
                              detail::column_name(a) + "'");
      coord_cols.push_back(c);
    }
  }

  const int n = g.vertex_count();
  Field u(n);
  std::vector<char> seen(n, 0);
  int rows = 0;
  std::vector<int> coords;
  while (std::getline(is, line)) {
    ++line_no;
    if (detail::trim(line).empty())
      continue;
    const auto cells = detail::split_csv(line);
    if (cells.size() != header.size())
      throw ValidationError("line " + std::to_string(line_no) + ": expected " +
                            std::to_string(header.size()) + " columns, got " +
                            std::to_string(cells.size()));
    int x = 0;
    if (index_col >= 0) {
      x = detail::parse_number<int>(cells[index_col], line_no, "index");
    } else {
      coords.clear();
      for (int c : coord_cols)
        coords.push_back(detail::parse_number<int>(cells[c], line_no, header[c]));
      try {
        x = g.lattice()->index_of(coords);
      } catch (const ValidationError& e) {
        throw ValidationError("line " + std::to_string(line_no) + ": " + e.what());
      }
    }
    if (x < 0 || x >= n)
      throw ValidationError("line " + std::to_string(line_no) + ": vertex " + std::to_string(x) +
                            " out of range");
    if (seen[x])
      throw ValidationError("line " + std::to_string(line_no) + ": vertex " + std::to_string(x) +
                            " appears twice");
    seen[x] = 1;
    u[x] = detail::parse_number<double>(cells[value_col], line_no, header[value_col]);
    ++rows;
  }
  if (rows != n)
    throw ValidationError("field file has " + std::to_string(rows) + " rows, graph has " +
                          std::to_string(n) + " vertices");
  if (!u.allFinite())
    throw ValidationError("field file contains non-finite values");
  return u;
}

inline void store_field(const std::filesystem::path& path, const GraphTopology& g, const Field& u,
                        bool coordinate_form = false)
{
  std::ofstream os(path);
  if (!os)
    throw ValidationError("cannot open " + path.string() + " for writing");
  write_field(os, g, u, coordinate_form);
  if (!os)
    throw ValidationError("write to " + path.string() + " failed");
}

inline Field load_field(const std::filesystem::path& path, const GraphTopology& g)
{
  std::ifstream is(path);
  if (!is)
    throw ValidationError("cannot open field file " + path.string());
  try {
    return read_field(is, g);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

/// Plot-ready dump: index, lattice coordinates (if any), u, V, residual.
inline void write_solution_table(std::ostream& os, const GraphTopology& g, const Field& u,
                                 const Field& potential, const Field& residual)
{
  const int dim = g.is_lattice() ? g.lattice()->dimension() : 0;
  os << "index,";
  for (int a = 0; a < dim; ++a)
    os << detail::column_name(a) << ',';
  os << "u,V,residual\n";
  for (int x = 0; x < g.vertex_count(); ++x) {
    os << x << ',';
    if (dim)
      for (int c : g.lattice()->coords_of(x))
        os << c << ',';
    os << format_double(u[x]) << ',' << format_double(potential[x]) << ','
       << format_double(residual[x]) << '\n';
  }
}

/// Edge list file: one "a b" or "a,b" pair per line; '#' starts a comment.
inline std::vector<std::pair<int, int>> read_edge_list(const std::filesystem::path& path,
                                                       int* max_index = nullptr)
{
  std::ifstream is(path);
  if (!is)
    throw ValidationError("cannot open edge file " + path.string());
  std::vector<std::pair<int, int>> edges;
  std::string line;
  int line_no = 0;
  int top = -1;
  while (std::getline(is, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    for (char& c : line)
      if (c == ',')
        c = ' ';
    std::istringstream ss(line);
    int a = 0, b = 0;
    if (!(ss >> a))
      continue;
    std::string rest;
    if (!(ss >> b) || (ss >> rest))
      throw ValidationError(path.string() + ": line " + std::to_string(line_no) +
                            ": expected two vertex indices");
    edges.emplace_back(a, b);
    top = std::max({top, a, b});
  }
  if (max_index)
    *max_index = top;
  return edges;
}

}  // namespace logschro::io
