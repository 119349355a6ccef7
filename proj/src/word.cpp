#include "procnet/word.hpp"

#include <stdexcept>

namespace procnet {

void Word::check_width(int width) {
  if (width < kMinWidth || width > kMaxWidth) {
    throw std::invalid_argument("word width " + std::to_string(width) + " outside [" +
                                std::to_string(kMinWidth) + ", " +
                                std::to_string(kMaxWidth) + "]");
  }
}

std::int64_t Word::min_value(int width) {
  check_width(width);
  if (width == 64) return INT64_MIN;
  return -(std::int64_t{1} << (width - 1));
}

std::int64_t Word::max_value(int width) {
  check_width(width);
  if (width == 64) return INT64_MAX;
  return (std::int64_t{1} << (width - 1)) - 1;
}

Word Word::wrap(std::int64_t raw, int width) {
  check_width(width);
  if (width == 64) return Word(raw, width);
  const std::uint64_t mask = (std::uint64_t{1} << width) - 1;
  std::uint64_t bits = static_cast<std::uint64_t>(raw) & mask;
  const std::uint64_t sign = std::uint64_t{1} << (width - 1);
  if (bits & sign) bits |= ~mask;
  return Word(static_cast<std::int64_t>(bits), width);
}

namespace {

int common_width(Word a, Word b) {
  if (a.width() != b.width()) {
    throw std::invalid_argument("word width mismatch: " + std::to_string(a.width()) +
                                " vs " + std::to_string(b.width()));
  }
  return a.width();
}

}  // namespace

// Unsigned arithmetic keeps the 64-bit case well defined.
Word operator+(Word a, Word b) {
  const int w = common_width(a, b);
  return Word::wrap(static_cast<std::int64_t>(static_cast<std::uint64_t>(a.value_) +
                                              static_cast<std::uint64_t>(b.value_)),
                    w);
}

Word operator-(Word a, Word b) {
  const int w = common_width(a, b);
  return Word::wrap(static_cast<std::int64_t>(static_cast<std::uint64_t>(a.value_) -
                                              static_cast<std::uint64_t>(b.value_)),
                    w);
}

Word operator*(Word a, Word b) {
  const int w = common_width(a, b);
  return Word::wrap(static_cast<std::int64_t>(static_cast<std::uint64_t>(a.value_) *
                                              static_cast<std::uint64_t>(b.value_)),
                    w);
}

}  // namespace procnet
