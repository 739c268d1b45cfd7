#include "cater/decimal.h"

#include <charconv>
#include <cmath>
#include <cstdlib>

#include "cater/error.h"

namespace cater {

EditRatio EditRatio::FromDouble(double percent) {
  if (!std::isfinite(percent)) {
    throw InvalidInputError("edit ratio must be a finite number");
  }
  // std::round rounds halves away from zero; the 1e-9 nudge absorbs binary
  // representation error of inputs such as 0.05 (stored as 0.04999...).
  const double scaled = percent * 10.0;
  const double nudged = scaled + std::copysign(1e-9, scaled);
  return FromTenths(static_cast<std::int64_t>(std::round(nudged)));
}

std::string EditRatio::ToString() const {
  const std::int64_t magnitude = std::llabs(tenths_);
  std::string out = tenths_ < 0 ? "-" : "";
  out += std::to_string(magnitude / 10);
  out += '.';
  out += static_cast<char>('0' + magnitude % 10);
  return out;
}

Weight Weight::FromMicros(std::int64_t micros) {
  if (micros < 0) throw InvalidInputError("weight must be nonnegative");
  if (micros > kMaxMicros) throw InvalidInputError("weight too large");
  Weight w;
  w.micros_ = micros;
  return w;
}

Weight Weight::FromString(std::string_view text) {
  const std::string original(text);
  if (text.empty()) throw InvalidInputError("empty weight");
  if (text.front() == '+') text.remove_prefix(1);
  if (!text.empty() && text.front() == '-') {
    throw InvalidInputError("weight must be nonnegative: " + original);
  }
  const auto dot = text.find('.');
  const std::string_view int_part = text.substr(0, dot);
  std::string_view frac_part =
      dot == std::string_view::npos ? std::string_view() : text.substr(dot + 1);
  if (int_part.empty() && frac_part.empty()) {
    throw InvalidInputError("malformed weight: " + original);
  }
  if (frac_part.size() > 6) {
    throw InvalidInputError("weight has more than six fractional digits: " +
                            original);
  }
  auto all_digits = [](std::string_view s) {
    for (char ch : s) {
      if (ch < '0' || ch > '9') return false;
    }
    return true;
  };
  if (!all_digits(int_part) || !all_digits(frac_part)) {
    throw InvalidInputError("malformed weight: " + original);
  }
  std::int64_t units = 0;
  if (!int_part.empty()) {
    auto [ptr, ec] =
        std::from_chars(int_part.data(), int_part.data() + int_part.size(), units);
    if (ec != std::errc() || units > kMaxMicros / kScale) {
      throw InvalidInputError("weight too large: " + original);
    }
  }
  std::int64_t frac = 0;
  std::int64_t place = kScale;
  for (char ch : frac_part) {
    place /= 10;
    frac += (ch - '0') * place;
  }
  return FromMicros(units * kScale + frac);
}

Weight Weight::FromDouble(double value) {
  if (!std::isfinite(value)) throw InvalidInputError("weight must be finite");
  if (value < 0) throw InvalidInputError("weight must be nonnegative");
  if (value > static_cast<double>(kMaxMicros / kScale)) {
    throw InvalidInputError("weight too large");
  }
  return FromMicros(static_cast<std::int64_t>(std::llround(value * kScale)));
}

std::string Weight::ToString() const {
  std::string out = std::to_string(micros_ / kScale);
  std::int64_t frac = micros_ % kScale;
  if (frac == 0) return out;
  std::string digits = std::to_string(frac);
  digits.insert(0, 6 - digits.size(), '0');
  while (digits.back() == '0') digits.pop_back();
  return out + "." + digits;
}

}  // namespace cater
