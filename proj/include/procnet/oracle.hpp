#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "procnet/shape.hpp"
#include "procnet/word.hpp"

namespace procnet {

enum class Orientation { ByRows, ByCols };

/// Dense integer matrix. The orientation says how it travels as a list of
/// lists: ByRows is a list of rows, ByCols a list of columns. Element access
/// is always (row, col).
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, Orientation o, int width = Word::kDefaultWidth);

  static Matrix from_rows(const std::vector<std::vector<Word>>& rows, int width);
  static Matrix from_cols(const std::vector<std::vector<Word>>& cols, int width);
  /// Integer convenience for tests; values are wrapped to `width`.
  static Matrix rows_of(const std::vector<std::vector<std::int64_t>>& rows,
                        int width = Word::kDefaultWidth);
  static Matrix cols_of(const std::vector<std::vector<std::int64_t>>& cols,
                        int width = Word::kDefaultWidth);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Orientation orientation() const { return orientation_; }
  int width() const { return width_; }

  Word at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  void set(std::size_t r, std::size_t c, Word w) { data_[r * cols_ + c] = w; }

  std::vector<Word> row(std::size_t r) const;
  std::vector<Word> col(std::size_t c) const;
  /// Lists in orientation order: rows for ByRows, columns for ByCols.
  std::vector<std::vector<Word>> lists() const;
  Value as_value() const;
  /// Same entries, other travelling order.
  Matrix reoriented(Orientation o) const;

  std::string to_string() const;

  /// Entry-wise equality; orientation is part of the value.
  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  Orientation orientation_ = Orientation::ByRows;
  int width_ = Word::kDefaultWidth;
  std::vector<Word> data_;
};

// Reference semantics of matrix multiplication over wrapping words. Lengths
// or dimensions that disagree throw std::invalid_argument.

std::vector<Word> zipwithmul_ref(const std::vector<Word>& as, const std::vector<Word>& bs);
/// Right fold of + seeded with 0.
Word sum_ref(const std::vector<Word>& rs, int width = Word::kDefaultWidth);
Word scalarp_ref(const std::vector<Word>& as, const std::vector<Word>& bs,
                 int width = Word::kDefaultWidth);
/// One scalar product per row of `ass` (ByRows).
std::vector<Word> vmmult_ref(const Matrix& ass, const std::vector<Word>& bs);
/// ass ByRows (n x m), bss ByCols (m x k) -> css ByCols (n x k).
Matrix mmult_ref(const Matrix& ass, const Matrix& bss);

}  // namespace procnet
