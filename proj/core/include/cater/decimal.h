#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace cater {

// A percentage held as an integer number of tenths of a percent, so that
// "rounded to one decimal place" values are represented exactly.
class EditRatio {
 public:
  constexpr EditRatio() = default;

  static constexpr EditRatio FromTenths(std::int64_t tenths) {
    EditRatio r;
    r.tenths_ = tenths;
    return r;
  }

  // Nearest tenth, halves rounded away from zero. Throws InvalidInputError on
  // non-finite input.
  static EditRatio FromDouble(double percent);

  constexpr std::int64_t tenths() const { return tenths_; }
  double ToDouble() const { return static_cast<double>(tenths_) / 10.0; }

  // Always one fractional digit: "6.0", "23.3", "250.0".
  std::string ToString() const;

  friend constexpr EditRatio operator+(EditRatio a, EditRatio b) {
    return FromTenths(a.tenths_ + b.tenths_);
  }
  friend constexpr auto operator<=>(EditRatio, EditRatio) = default;

 private:
  std::int64_t tenths_ = 0;
};

// Nonnegative category weight with six exact fractional digits.
class Weight {
 public:
  static constexpr std::int64_t kScale = 1'000'000;
  // Keeps every intermediate product of the score formula inside 64 bits.
  static constexpr std::int64_t kMaxMicros = 1'000'000 * kScale;

  constexpr Weight() = default;

  static Weight FromMicros(std::int64_t micros);
  static Weight FromInteger(std::int64_t units) { return FromMicros(units * kScale); }
  // Accepts plain decimal notation ("4", "0.5", "1.125"); at most six
  // fractional digits. Throws InvalidInputError otherwise.
  static Weight FromString(std::string_view text);
  // Rounds to the nearest micro-unit.
  static Weight FromDouble(double value);

  constexpr std::int64_t micros() const { return micros_; }
  double ToDouble() const { return static_cast<double>(micros_) / kScale; }

  // Shortest exact decimal: "1", "0.5", "10".
  std::string ToString() const;

  friend constexpr auto operator<=>(Weight, Weight) = default;

 private:
  std::int64_t micros_ = 0;
};

}  // namespace cater
