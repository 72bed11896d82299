#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "panelcp/errors.hpp"
#include "panelcp/panel_data.hpp"

namespace panelcp {

enum class Transform { none, log, premium_normalize };

inline const char* to_string(Transform transform) {
  switch (transform) {
    case Transform::none:
      return "none";
    case Transform::log:
      return "log";
    case Transform::premium_normalize:
      return "premium";
  }
  return "none";
}

struct IngestOptions {
  bool has_header = false;
  Transform transform = Transform::none;
  std::optional<std::string> premium_path;
  char delimiter = ',';
  bool transpose = false;  // set when the file has time in rows
};

namespace detail {

inline std::vector<std::string> split_line(const std::string& line,
                                           char delimiter) {
  std::vector<std::string> cells;
  std::string::size_type start = 0;
  while (true) {
    const auto pos = line.find(delimiter, start);
    if (pos == std::string::npos) {
      cells.push_back(line.substr(start));
      break;
    }
    cells.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return cells;
}

inline std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

inline Matrix read_grid(const std::string& path, bool has_header,
                        char delimiter) {
  std::ifstream file(path);
  if (!file) {
    throw FileError("cannot open '" + path + "'");
  }
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_number = 0;
  bool header_pending = has_header;
  while (std::getline(file, line)) {
    ++line_number;
    if (trim(line).empty()) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    const auto cells = split_line(line, delimiter);
    std::vector<double> row;
    row.reserve(cells.size());
    const int data_row = static_cast<int>(rows.size()) + 1;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const std::string cell = trim(cells[c]);
      double value = 0.0;
      const auto result =
          std::from_chars(cell.data(), cell.data() + cell.size(), value);
      if (result.ec != std::errc{} || result.ptr != cell.data() + cell.size()) {
        throw NonNumericCellError(
            data_row, static_cast<int>(c) + 1,
            "cell (" + std::to_string(data_row) + ", " + std::to_string(c + 1) +
                ") is not numeric: '" + cell + "'");
      }
      row.push_back(value);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw RaggedRowsError(
          data_row, "row " + std::to_string(data_row) + " has " +
                        std::to_string(row.size()) + " cells, expected " +
                        std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw FileError("'" + path + "' contains no data rows");
  }
  Matrix grid(static_cast<Eigen::Index>(rows.size()),
              static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      grid(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rows[i][j];
    }
  }
  return grid;
}

}  // namespace detail

// Reads a delimiter-separated numeric grid (rows = panels) and applies
// the requested transform. Premium normalization divides entrywise by a
// same-shape premium grid.
inline PanelMatrix load_panel_csv(const std::string& path,
                                  const IngestOptions& options = {}) {
  Matrix grid =
      detail::read_grid(path, options.has_header, options.delimiter);
  if (options.transpose) grid = grid.transpose().eval();

  switch (options.transform) {
    case Transform::none:
      break;
    case Transform::log: {
      for (Eigen::Index i = 0; i < grid.rows(); ++i) {
        for (Eigen::Index j = 0; j < grid.cols(); ++j) {
          if (!(grid(i, j) > 0.0)) {
            throw NonPositiveForLogError(
                static_cast<int>(i) + 1, static_cast<int>(j) + 1,
                "log transform needs strictly positive data; cell (" +
                    std::to_string(i + 1) + ", " + std::to_string(j + 1) +
                    ") is " + std::to_string(grid(i, j)));
          }
          grid(i, j) = std::log(grid(i, j));
        }
      }
      break;
    }
    case Transform::premium_normalize: {
      if (!options.premium_path) {
        throw InvalidArgumentError(
            "premium normalization needs a premium grid path");
      }
      Matrix premium = detail::read_grid(*options.premium_path,
                                         options.has_header, options.delimiter);
      if (options.transpose) premium = premium.transpose().eval();
      if (premium.rows() != grid.rows() || premium.cols() != grid.cols()) {
        throw ShapeMismatchError(
            "premium grid is " + std::to_string(premium.rows()) + "x" +
            std::to_string(premium.cols()) + " but data is " +
            std::to_string(grid.rows()) + "x" + std::to_string(grid.cols()));
      }
      grid = grid.cwiseQuotient(premium);
      break;
    }
  }
  return PanelMatrix(std::move(grid));
}

// Writes the grid with round-trip-exact decimal formatting.
inline void write_panel_csv(const std::string& path, const PanelMatrix& data,
                            char delimiter = ',') {
  std::ofstream file(path);
  if (!file) {
    throw FileError("cannot write '" + path + "'");
  }
  const Matrix& values = data.values();
  char buffer[64];
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      std::snprintf(buffer, sizeof(buffer), "%.17g", values(i, j));
      if (j > 0) file << delimiter;
      file << buffer;
    }
    file << '\n';
  }
  if (!file) {
    throw FileError("failed while writing '" + path + "'");
  }
}

}  // namespace panelcp
