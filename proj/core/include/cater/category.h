#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace cater {

// The five quality dimensions. Order is significant: it is the order used in
// prompts, reports and CSV columns.
enum class Category : std::size_t {
  kLinguisticAccuracy = 0,
  kSemanticAccuracy = 1,
  kContextualFit = 2,
  kStylisticAppropriateness = 3,
  kInformationCompleteness = 4,
};

inline constexpr std::size_t kCategoryCount = 5;

inline constexpr std::array<Category, kCategoryCount> kAllCategories = {
    Category::kLinguisticAccuracy,       Category::kSemanticAccuracy,
    Category::kContextualFit,            Category::kStylisticAppropriateness,
    Category::kInformationCompleteness,
};

constexpr std::size_t Index(Category c) { return static_cast<std::size_t>(c); }

// Short code: "LA", "SA", "CF", "STA", "IC".
std::string_view Code(Category c);

// Human readable name, e.g. "Linguistic Accuracy".
std::string_view DisplayName(Category c);

// Exact, case-sensitive match against the short codes.
std::optional<Category> ParseCategory(std::string_view code);

// Fixed-size table indexed by Category.
template <typename T>
class PerCategory {
 public:
  PerCategory() = default;
  explicit PerCategory(const std::array<T, kCategoryCount>& values)
      : values_(values) {}

  T& operator[](Category c) { return values_[Index(c)]; }
  const T& operator[](Category c) const { return values_[Index(c)]; }

  auto begin() { return values_.begin(); }
  auto end() { return values_.end(); }
  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

  const std::array<T, kCategoryCount>& values() const { return values_; }

  friend bool operator==(const PerCategory&, const PerCategory&) = default;

 private:
  std::array<T, kCategoryCount> values_{};
};

}  // namespace cater
