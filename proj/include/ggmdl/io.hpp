#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>

#include "ggmdl/matrix.hpp"

namespace ggmdl {

// 17 significant digits: enough for exact double round-trips, so
// write -> read -> write is byte-identical.
inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

// rows = observations, columns = variables; comma separated, no header
inline std::string format_csv_matrix(const Matrix& m) {
  std::string out;
  out.reserve(static_cast<size_t>(m.size()) * 24);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out += ',';
      out += format_double(m(i, j));
    }
    out += '\n';
  }
  return out;
}

inline Matrix parse_csv_matrix(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream is(text);
  std::string line;
  size_t width = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    size_t pos = 0;
    while (pos <= line.size()) {
      const size_t comma = line.find(',', pos);
      const std::string cell =
          line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        throw std::runtime_error("csv: cell \"" + cell + "\" is not a number");
      }
      while (used < cell.size() &&
             (cell[used] == ' ' || cell[used] == '\t' || cell[used] == '\r'))
        ++used;
      if (used != cell.size())
        throw std::runtime_error("csv: cell \"" + cell + "\" has trailing junk");
      row.push_back(v);
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (width == 0) width = row.size();
    if (row.size() != width) throw std::runtime_error("csv: ragged row widths");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("csv: no data rows");
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < width; ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return m;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (!in.good() && !in.eof())
    throw std::runtime_error("error while reading " + path.string());
  return buf.str();
}

// write to <path>.tmp then rename, so a crash never leaves a partial file at
// the destination
inline void atomic_write_file(const std::filesystem::path& path,
                              const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out.good()) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw std::runtime_error("error while writing " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw std::runtime_error("cannot move " + tmp.string() + " to " + path.string());
  }
}

inline Matrix read_csv_matrix(const std::filesystem::path& path) {
  return parse_csv_matrix(read_file(path));
}

inline void write_csv_matrix(const std::filesystem::path& path, const Matrix& m) {
  atomic_write_file(path, format_csv_matrix(m));
}

}  // namespace ggmdl
