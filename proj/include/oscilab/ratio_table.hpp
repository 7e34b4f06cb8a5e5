#pragma once

// Numeric result tables and their CSV form: header row, fixed column order, values in
// %.12g (12 significant digits), LF line endings.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "oscilab/error.hpp"

namespace oscilab {

struct RatioTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add_row(std::vector<double> row) {
    if (row.size() != columns.size())
      throw error("RatioTable: row has " + std::to_string(row.size()) + " values for " + std::to_string(columns.size()) + " columns");
    rows.push_back(std::move(row));
  }

  std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == name) return i;
    throw error("RatioTable: no column '" + name + "'");
  }

  std::vector<double> values(const std::string& name) const {
    const std::size_t c = column(name);
    std::vector<double> v;
    for (const auto& r : rows) v.push_back(r[c]);
    return v;
  }
};

inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string format_csv(const RatioTable& t) {
  if (t.columns.empty() || t.rows.empty()) throw error("emit_ratio_table: empty table");
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
  out += '\n';
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + format_number(r[i]);
    out += '\n';
  }
  return out;
}

inline void emit_ratio_table(const RatioTable& t, const std::string& path) {
  const std::string text = format_csv(t);
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw error("emit_ratio_table: cannot write '" + path + "'");
  os << text;
  if (!os) throw error("emit_ratio_table: write to '" + path + "' failed");
}

inline RatioTable parse_csv(const std::string& text) {
  RatioTable t;
  std::istringstream is(text);
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(s);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    return cells;
  };
  if (!std::getline(is, line)) throw error("parse_csv: missing header");
  t.columns = split(line);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    for (const auto& c : split(line)) {
      try {
        row.push_back(std::stod(c));
      } catch (...) {
        throw error("parse_csv: malformed value '" + c + "'");
      }
    }
    t.add_row(std::move(row));
  }
  return t;
}

inline RatioTable parse_ratio_table(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw error("parse_ratio_table: cannot read '" + path + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_csv(ss.str());
}

/// Least-squares slope of y against x.
inline double fitted_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw error("fitted_slope: need at least two matching points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw error("fitted_slope: degenerate abscissae");
  return sxy / sxx;
}

/// Slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw error("loglog_slope: values must be positive");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  return fitted_slope(lx, ly);
}

}  // namespace oscilab
