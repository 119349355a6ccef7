#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace procnet {

/// Fixed-width two's-complement integer carried on data channels.
///
/// Every arithmetic result is reduced modulo 2^width, the way a hardware
/// register of that width behaves. Operands of a binary operation must share
/// a width.
class Word {
 public:
  static constexpr int kDefaultWidth = 16;
  static constexpr int kMinWidth = 2;
  static constexpr int kMaxWidth = 64;

  constexpr Word() = default;

  /// Reduces `raw` into the representable range of `width` bits.
  static Word wrap(std::int64_t raw, int width = kDefaultWidth);

  static std::int64_t min_value(int width);
  static std::int64_t max_value(int width);
  static void check_width(int width);

  std::int64_t value() const { return value_; }
  int width() const { return width_; }

  friend Word operator+(Word a, Word b);
  friend Word operator-(Word a, Word b);
  friend Word operator*(Word a, Word b);

  friend bool operator==(Word a, Word b) = default;
  friend auto operator<=>(Word a, Word b) = default;

  std::string to_string() const { return std::to_string(value_); }

 private:
  constexpr Word(std::int64_t v, int w) : value_(v), width_(w) {}

  std::int64_t value_ = 0;
  int width_ = kDefaultWidth;
};

}  // namespace procnet
