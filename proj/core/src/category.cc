#include "cater/category.h"

namespace cater {

namespace {

constexpr std::array<std::string_view, kCategoryCount> kCodes = {
    "LA", "SA", "CF", "STA", "IC"};

constexpr std::array<std::string_view, kCategoryCount> kNames = {
    "Linguistic Accuracy", "Semantic Accuracy", "Contextual Fit",
    "Stylistic Appropriateness", "Information Completeness"};

}  // namespace

std::string_view Code(Category c) { return kCodes[Index(c)]; }

std::string_view DisplayName(Category c) { return kNames[Index(c)]; }

std::optional<Category> ParseCategory(std::string_view code) {
  for (Category c : kAllCategories) {
    if (kCodes[Index(c)] == code) return c;
  }
  return std::nullopt;
}

}  // namespace cater
