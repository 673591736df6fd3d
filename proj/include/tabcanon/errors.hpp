#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tabcanon {

/// Base of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GridPos {
  int row = 0;
  int col = 0;
  friend bool operator==(const GridPos&, const GridPos&) = default;
  friend auto operator<=>(const GridPos&, const GridPos&) = default;
};

/// Grid tiling failure. `positions` lists every offending grid position.
class GridError : public Error {
 public:
  GridError(const std::string& what, std::vector<GridPos> positions)
      : Error(what), positions_(std::move(positions)) {}
  const std::vector<GridPos>& positions() const noexcept { return positions_; }

 private:
  std::vector<GridPos> positions_;
};

class OverlapError : public GridError {
 public:
  explicit OverlapError(std::vector<GridPos> positions);
};

class GapError : public GridError {
 public:
  explicit GapError(std::vector<GridPos> positions);
};

class SpanOutOfRangeError : public GridError {
 public:
  SpanOutOfRangeError(std::size_t cell_index, std::vector<GridPos> positions);
};

class NotNestedError : public Error {
 public:
  using Error::Error;
};

class MarkupError : public Error {
 public:
  using Error::Error;
};

class RaggedGridError : public MarkupError {
 public:
  using MarkupError::MarkupError;
};

/// JSON schema violation; `path()` is a JSONPath such as `$.cells[2].row_end`.
class SchemaError : public Error {
 public:
  SchemaError(std::string path, std::string message)
      : Error(path + ": " + message), path_(std::move(path)), message_(std::move(message)) {}
  SchemaError(const std::string& file, std::string path, std::string message)
      : Error(file + ": " + path + ": " + message), path_(std::move(path)), message_(std::move(message)) {}
  const std::string& path() const noexcept { return path_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::string path_;
  std::string message_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class EmptyTokenStreamError : public Error {
 public:
  using Error::Error;
};

/// Completion could not define a row or column extent.
class UndefinedExtentError : public Error {
 public:
  enum class Axis { Row, Column };
  UndefinedExtentError(Axis axis, int index);
  Axis axis() const noexcept { return axis_; }
  int index() const noexcept { return index_; }

 private:
  Axis axis_;
  int index_;
};

class NonMonotonicError : public Error {
 public:
  using Error::Error;
};

class MissingBoxesError : public Error {
 public:
  using Error::Error;
};

class TooFewRowsError : public Error {
 public:
  using Error::Error;
};

class NoTableObjectError : public Error {
 public:
  using Error::Error;
};

class DegenerateStructureError : public Error {
 public:
  using Error::Error;
};

}  // namespace tabcanon
