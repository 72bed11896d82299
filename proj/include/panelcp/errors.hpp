#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace panelcp {

// Base class for all library errors. Every error carries a stable,
// machine-readable code string that the CLI surfaces verbatim.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

struct InvalidPanelError : Error {
  explicit InvalidPanelError(const std::string& message)
      : Error("invalid_panel", message) {}
};

struct ShortPanelError : Error {
  explicit ShortPanelError(const std::string& message)
      : Error("short_panel", message) {}
};

struct TooFewPanelsError : Error {
  explicit TooFewPanelsError(const std::string& message)
      : Error("too_few_panels", message) {}
};

// Raised when a denominator of the ratio statistic falls below the
// configured absolute floor: constant or collinear data has no scale.
struct DegenerateDenominatorError : Error {
  DegenerateDenominatorError(int time_index, const std::string& message)
      : Error("degenerate_denominator", message), time_index(time_index) {}
  int time_index;
};

struct ZeroVarianceError : Error {
  explicit ZeroVarianceError(const std::string& message)
      : Error("zero_variance", message) {}
};

struct KernelClassError : Error {
  explicit KernelClassError(const std::string& message)
      : Error("invalid_kernel", message) {}
};

struct NotPsdError : Error {
  explicit NotPsdError(const std::string& message)
      : Error("not_psd", message) {}
};

// A single simulated draw whose ratio functional has no usable
// denominator. Consumed internally by sampler loops.
struct DegenerateDrawError : Error {
  explicit DegenerateDrawError(const std::string& message)
      : Error("degenerate_draw", message) {}
};

struct TooManyDegenerateError : Error {
  TooManyDegenerateError(int count, const std::string& message)
      : Error("too_many_degenerate", message), count(count) {}
  int count;
};

struct NonStationaryParamsError : Error {
  explicit NonStationaryParamsError(const std::string& message)
      : Error("non_stationary_params", message) {}
};

struct InvalidArgumentError : Error {
  explicit InvalidArgumentError(const std::string& message)
      : Error("invalid_argument", message) {}
};

// --- file ingestion -------------------------------------------------------

struct FileError : Error {
  explicit FileError(const std::string& message)
      : Error("file_error", message) {}
};

struct RaggedRowsError : Error {
  RaggedRowsError(int row, const std::string& message)
      : Error("ragged_rows", message), row(row) {}
  int row;  // 1-based data row
};

struct NonNumericCellError : Error {
  NonNumericCellError(int row, int col, const std::string& message)
      : Error("non_numeric_cell", message), row(row), col(col) {}
  int row;
  int col;
};

struct NonPositiveForLogError : Error {
  NonPositiveForLogError(int row, int col, const std::string& message)
      : Error("non_positive_for_log", message), row(row), col(col) {}
  int row;
  int col;
};

struct ShapeMismatchError : Error {
  explicit ShapeMismatchError(const std::string& message)
      : Error("shape_mismatch", message) {}
};

}  // namespace panelcp
