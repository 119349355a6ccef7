#include "procnet/oracle.hpp"

#include <stdexcept>

namespace procnet {

Matrix::Matrix(std::size_t rows, std::size_t cols, Orientation o, int width)
    : rows_(rows), cols_(cols), orientation_(o), width_(width),
      data_(rows * cols, Word::wrap(0, width)) {
  Word::check_width(width);
}

namespace {

void check_rectangular(const std::vector<std::vector<Word>>& lists) {
  for (const auto& l : lists) {
    if (l.size() != lists.front().size()) throw std::invalid_argument("ragged matrix lists");
  }
}

std::vector<std::vector<Word>> wrap_all(const std::vector<std::vector<std::int64_t>>& xs,
                                        int width) {
  std::vector<std::vector<Word>> out;
  for (const auto& l : xs) {
    std::vector<Word> ws;
    for (auto x : l) ws.push_back(Word::wrap(x, width));
    out.push_back(std::move(ws));
  }
  return out;
}

}  // namespace

Matrix Matrix::from_rows(const std::vector<std::vector<Word>>& rows, int width) {
  check_rectangular(rows);
  Matrix m(rows.size(), rows.empty() ? 0 : rows.front().size(), Orientation::ByRows, width);
  for (std::size_t r = 0; r < m.rows_; ++r) {
    for (std::size_t c = 0; c < m.cols_; ++c) m.set(r, c, rows[r][c]);
  }
  return m;
}

Matrix Matrix::from_cols(const std::vector<std::vector<Word>>& cols, int width) {
  check_rectangular(cols);
  Matrix m(cols.empty() ? 0 : cols.front().size(), cols.size(), Orientation::ByCols, width);
  for (std::size_t c = 0; c < m.cols_; ++c) {
    for (std::size_t r = 0; r < m.rows_; ++r) m.set(r, c, cols[c][r]);
  }
  return m;
}

Matrix Matrix::rows_of(const std::vector<std::vector<std::int64_t>>& rows, int width) {
  return from_rows(wrap_all(rows, width), width);
}

Matrix Matrix::cols_of(const std::vector<std::vector<std::int64_t>>& cols, int width) {
  return from_cols(wrap_all(cols, width), width);
}

std::vector<Word> Matrix::row(std::size_t r) const {
  return std::vector<Word>(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                           data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

std::vector<Word> Matrix::col(std::size_t c) const {
  std::vector<Word> out;
  for (std::size_t r = 0; r < rows_; ++r) out.push_back(at(r, c));
  return out;
}

std::vector<std::vector<Word>> Matrix::lists() const {
  std::vector<std::vector<Word>> out;
  if (orientation_ == Orientation::ByRows) {
    for (std::size_t r = 0; r < rows_; ++r) out.push_back(row(r));
  } else {
    for (std::size_t c = 0; c < cols_; ++c) out.push_back(col(c));
  }
  return out;
}

Value Matrix::as_value() const {
  Value::List items;
  for (const auto& l : lists()) items.push_back(Value::words(l));
  return Value::list(std::move(items));
}

Matrix Matrix::reoriented(Orientation o) const {
  Matrix m = *this;
  m.orientation_ = o;
  return m;
}

std::string Matrix::to_string() const {
  std::string s = orientation_ == Orientation::ByRows ? "rows[" : "cols[";
  const auto ls = lists();
  for (std::size_t i = 0; i < ls.size(); ++i) {
    if (i) s += ",";
    s += "[";
    for (std::size_t j = 0; j < ls[i].size(); ++j) {
      if (j) s += ",";
      s += ls[i][j].to_string();
    }
    s += "]";
  }
  return s + "]";
}

std::vector<Word> zipwithmul_ref(const std::vector<Word>& as, const std::vector<Word>& bs) {
  if (as.size() != bs.size()) {
    throw std::invalid_argument("zipwithmul: lengths " + std::to_string(as.size()) + " and " +
                                std::to_string(bs.size()) + " differ");
  }
  std::vector<Word> out;
  for (std::size_t i = 0; i < as.size(); ++i) out.push_back(as[i] * bs[i]);
  return out;
}

Word sum_ref(const std::vector<Word>& rs, int width) {
  Word acc = Word::wrap(0, width);
  for (auto it = rs.rbegin(); it != rs.rend(); ++it) acc = *it + acc;
  return acc;
}

Word scalarp_ref(const std::vector<Word>& as, const std::vector<Word>& bs, int width) {
  return sum_ref(zipwithmul_ref(as, bs), width);
}

std::vector<Word> vmmult_ref(const Matrix& ass, const std::vector<Word>& bs) {
  if (ass.cols() != bs.size()) {
    throw std::invalid_argument("vmmult: rows of length " + std::to_string(ass.cols()) +
                                " against a column of length " + std::to_string(bs.size()));
  }
  std::vector<Word> out;
  for (std::size_t r = 0; r < ass.rows(); ++r) out.push_back(scalarp_ref(ass.row(r), bs, ass.width()));
  return out;
}

Matrix mmult_ref(const Matrix& ass, const Matrix& bss) {
  if (ass.cols() != bss.rows()) {
    throw std::invalid_argument("mmult: inner dimensions " + std::to_string(ass.cols()) +
                                " and " + std::to_string(bss.rows()) + " disagree");
  }
  std::vector<std::vector<Word>> cols;
  for (std::size_t j = 0; j < bss.cols(); ++j) cols.push_back(vmmult_ref(ass, bss.col(j)));
  Matrix css(ass.rows(), bss.cols(), Orientation::ByCols, ass.width());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    for (std::size_t i = 0; i < ass.rows(); ++i) css.set(i, j, cols[j][i]);
  }
  return css;
}

}  // namespace procnet
