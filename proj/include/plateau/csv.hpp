// CSV persistence.  Doubles are written as the shortest decimal that parses
// back to the same bits, so written-then-read tables reproduce exactly.
#pragma once

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "plateau/dual.hpp"
#include "plateau/symtable.hpp"

namespace plateau {
namespace io {

inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{}) throw std::invalid_argument("bad numeric field: " + s);
  return v;
}

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

inline void write_csv(const std::string& path, const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  for (std::size_t i = 0; i < header.size(); ++i)
    out << header[i] << (i + 1 < header.size() ? "," : "\n");
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << format_double(row[i]) << (i + 1 < row.size() ? "," : "\n");
  }
}

inline Csv read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  Csv csv;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    if (first) {
      while (std::getline(ss, cell, ',')) csv.header.push_back(cell);
      first = false;
      continue;
    }
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(parse_double(cell));
    csv.rows.push_back(std::move(row));
  }
  return csv;
}

inline std::vector<std::string> coord_header(int d, const std::string& prefix) {
  std::vector<std::string> h;
  for (int i = 1; i <= d; ++i) h.push_back(prefix + std::to_string(i));
  return h;
}

// FieldTable serialization: x1,...,xd,value
inline void write_field_csv(const std::string& path, const FieldTable& f) {
  auto header = coord_header(f.geometry().dim, "x");
  header.push_back("value");
  std::vector<std::vector<double>> rows;
  f.for_each([&](const Point& x, double v) {
    std::vector<double> row;
    for (int i = 0; i < x.dim; ++i) row.push_back(double(x.c[i]));
    row.push_back(v);
    rows.push_back(std::move(row));
  });
  write_csv(path, header, rows);
}

// DualGrid serialization: k1,...,kd,re,im
inline void write_dual_csv(const std::string& path, const DualGrid& g) {
  auto header = coord_header(g.dim(), "k");
  header.push_back("re");
  header.push_back("im");
  std::vector<std::vector<double>> rows;
  for (std::int64_t i = 0; i < g.size(); ++i) {
    auto k = g.freq(i);
    std::vector<double> row;
    for (int a = 0; a < g.dim(); ++a) row.push_back(k[a]);
    row.push_back(g[i].real());
    row.push_back(g[i].imag());
    rows.push_back(std::move(row));
  }
  write_csv(path, header, rows);
}

// symmetry-reduced spectrum: one row per orbit representative
inline void write_sym_spectrum_csv(const std::string& path, const SymSpectrum& sp) {
  auto header = coord_header(sp.dim, "k");
  header.push_back("re");
  header.push_back("im");
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < sp.pts.size(); ++i) {
    std::vector<double> row;
    for (int a = 0; a < sp.dim; ++a) row.push_back(sp.freq_of(sp.pts[i][a]));
    row.push_back(sp.val[i]);
    row.push_back(0.0);
    rows.push_back(std::move(row));
  }
  write_csv(path, header, rows);
}

}  // namespace io
}  // namespace plateau
