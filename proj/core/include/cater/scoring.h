#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "cater/category.h"
#include "cater/decimal.h"

namespace cater {

class WeightProfile {
 public:
  // LA=1, SA=4, CF=3, STA=2, IC=5.
  WeightProfile();
  explicit WeightProfile(const PerCategory<Weight>& weights);

  static WeightProfile Default() { return WeightProfile(); }

  const Weight& operator[](Category c) const { return weights_[c]; }
  void Set(Category c, Weight w) { weights_[c] = w; }

  const PerCategory<Weight>& weights() const { return weights_; }

  friend bool operator==(const WeightProfile&, const WeightProfile&) = default;

 private:
  PerCategory<Weight> weights_;
};

// Score thresholds mapped to labels. Bands are checked from the highest
// threshold down; the lowest threshold must be 0 so every score gets a label.
class RatingBands {
 public:
  struct Band {
    int min_score;
    std::string label;
    friend bool operator==(const Band&, const Band&) = default;
  };

  // >=90 Excellent, >=70 Good, >=50 Fair, >=40 Poor, otherwise Unusable.
  RatingBands();
  // Throws InvalidInputError if thresholds are out of [0,100], duplicated,
  // or no band starts at 0.
  explicit RatingBands(std::vector<Band> bands);

  const std::string& Classify(int overall_score) const;
  const std::vector<Band>& bands() const { return bands_; }

  friend bool operator==(const RatingBands&, const RatingBands&) = default;

 private:
  std::vector<Band> bands_;  // sorted by descending min_score
};

struct CategoryResult {
  Category category = Category::kLinguisticAccuracy;
  std::int64_t words_to_correct = 0;
  EditRatio er_percent;
  int score = 100;
  std::int64_t error_count = 0;

  friend bool operator==(const CategoryResult&, const CategoryResult&) = default;
};

struct ScoreReport {
  PerCategory<CategoryResult> categories;
  int overall_score = 100;
  EditRatio overall_er_percent;
  std::int64_t source_word_count = 1;
  WeightProfile weight_profile;
  std::string rating;

  friend bool operator==(const ScoreReport&, const ScoreReport&) = default;
};

// Aggregated findings for one category, as fed into AssembleReport.
struct CategoryTally {
  std::int64_t words_to_correct = 0;
  std::int64_t error_count = 0;
};

// words_to_correct / source_word_count * 100, rounded half-up to one decimal.
EditRatio ComputeErPercent(std::int64_t words_to_correct,
                           std::int64_t source_word_count);

// max(0, floor((1 - er/100 * weight) * 100)) evaluated exactly; any
// er_percent above 100.0 scores 0 regardless of weight.
int ComputeCategoryScore(EditRatio er_percent, Weight weight);

// max(0, sum - 400). Requires exactly five scores in [0,100].
int ComputeOverallScore(std::span<const int> scores);

EditRatio ComputeOverallEr(std::span<const EditRatio> er_percents);

ScoreReport AssembleReport(const std::map<Category, CategoryTally>& tallies,
                           std::int64_t source_word_count,
                           const WeightProfile& weights,
                           const RatingBands& bands = RatingBands());

// Convenience overload: error counts are left at zero.
ScoreReport AssembleReport(const std::map<Category, std::int64_t>& words,
                           std::int64_t source_word_count,
                           const WeightProfile& weights,
                           const RatingBands& bands = RatingBands());

std::string ClassifyRating(int overall_score,
                          const RatingBands& bands = RatingBands());

}  // namespace cater
