#include "cater/scoring.h"

#include <algorithm>
#include <limits>
#include <set>
#include <string>

#include "cater/error.h"

namespace cater {

namespace {

// ER% is in tenths and weights in millionths, so er/100 * w is
// tenths * micros / (10 * 100 * 10^6 / 100) = tenths * micros / 10^7
// "score points".
constexpr std::int64_t kPenaltyDenominator = 10'000'000;

}  // namespace

WeightProfile::WeightProfile()
    : weights_({Weight::FromInteger(1), Weight::FromInteger(4),
                Weight::FromInteger(3), Weight::FromInteger(2),
                Weight::FromInteger(5)}) {}

WeightProfile::WeightProfile(const PerCategory<Weight>& weights)
    : weights_(weights) {}

RatingBands::RatingBands()
    : bands_({{90, "Excellent"},
              {70, "Good"},
              {50, "Fair"},
              {40, "Poor"},
              {0, "Unusable"}}) {}

RatingBands::RatingBands(std::vector<Band> bands) : bands_(std::move(bands)) {
  if (bands_.empty()) throw InvalidInputError("rating bands must not be empty");
  std::set<int> seen;
  for (const Band& b : bands_) {
    if (b.min_score < 0 || b.min_score > 100) {
      throw InvalidInputError("rating band threshold out of [0,100]: " +
                              std::to_string(b.min_score));
    }
    if (!seen.insert(b.min_score).second) {
      throw InvalidInputError("duplicate rating band threshold: " +
                              std::to_string(b.min_score));
    }
    if (b.label.empty()) throw InvalidInputError("rating band label is empty");
  }
  if (!seen.contains(0)) {
    throw InvalidInputError("rating bands must include a band starting at 0");
  }
  std::sort(bands_.begin(), bands_.end(),
            [](const Band& a, const Band& b) { return a.min_score > b.min_score; });
}

const std::string& RatingBands::Classify(int overall_score) const {
  if (overall_score < 0 || overall_score > 100) {
    throw InvalidInputError("overall score out of [0,100]: " +
                            std::to_string(overall_score));
  }
  for (const Band& b : bands_) {
    if (overall_score >= b.min_score) return b.label;
  }
  return bands_.back().label;  // unreachable: a band starts at 0
}

EditRatio ComputeErPercent(std::int64_t words_to_correct,
                           std::int64_t source_word_count) {
  if (source_word_count < 1) {
    throw InvalidInputError("source word count must be at least 1, got " +
                            std::to_string(source_word_count));
  }
  if (words_to_correct < 0) {
    throw InvalidInputError("words to correct must be nonnegative, got " +
                            std::to_string(words_to_correct));
  }
  // Half-up rounding of words * 1000 / count, in tenths of a percent.
  using Wide = unsigned __int128;
  const Wide numerator = static_cast<Wide>(words_to_correct) * 2000 +
                         static_cast<Wide>(source_word_count);
  const Wide tenths = numerator / (static_cast<Wide>(source_word_count) * 2);
  if (tenths > static_cast<Wide>(std::numeric_limits<std::int64_t>::max())) {
    throw InvalidInputError("edit ratio overflows");
  }
  return EditRatio::FromTenths(static_cast<std::int64_t>(tenths));
}

int ComputeCategoryScore(EditRatio er_percent, Weight weight) {
  if (er_percent.tenths() < 0) {
    throw InvalidInputError("ER% must be nonnegative, got " +
                            er_percent.ToString());
  }
  if (weight.micros() < 0) throw InvalidInputError("weight must be nonnegative");
  if (er_percent.tenths() > 1000) return 0;
  // floor(100 - p) == 100 - ceil(p), p = tenths * micros / 10^7 >= 0.
  const std::int64_t product = er_percent.tenths() * weight.micros();
  const std::int64_t penalty =
      (product + kPenaltyDenominator - 1) / kPenaltyDenominator;
  return static_cast<int>(std::max<std::int64_t>(0, 100 - penalty));
}

int ComputeOverallScore(std::span<const int> scores) {
  if (scores.size() != kCategoryCount) {
    throw InvalidInputError("expected exactly five category scores, got " +
                            std::to_string(scores.size()));
  }
  int sum = 0;
  for (int s : scores) {
    if (s < 0 || s > 100) {
      throw InvalidInputError("category score out of [0,100]: " +
                              std::to_string(s));
    }
    sum += s;
  }
  return std::max(0, sum - 400);
}

EditRatio ComputeOverallEr(std::span<const EditRatio> er_percents) {
  if (er_percents.size() != kCategoryCount) {
    throw InvalidInputError("expected exactly five ER% values, got " +
                            std::to_string(er_percents.size()));
  }
  EditRatio total;
  for (EditRatio er : er_percents) {
    if (er.tenths() < 0) {
      throw InvalidInputError("ER% must be nonnegative, got " + er.ToString());
    }
    total = total + er;
  }
  return total;
}

ScoreReport AssembleReport(const std::map<Category, CategoryTally>& tallies,
                           std::int64_t source_word_count,
                           const WeightProfile& weights,
                           const RatingBands& bands) {
  if (source_word_count < 1) {
    throw InvalidInputError("source word count must be at least 1, got " +
                            std::to_string(source_word_count));
  }
  ScoreReport report;
  report.source_word_count = source_word_count;
  report.weight_profile = weights;

  std::array<int, kCategoryCount> scores{};
  std::array<EditRatio, kCategoryCount> ratios{};
  for (Category c : kAllCategories) {
    auto it = tallies.find(c);
    if (it == tallies.end()) {
      throw InvalidInputError("missing category " + std::string(Code(c)));
    }
    if (it->second.error_count < 0) {
      throw InvalidInputError("error count must be nonnegative");
    }
    CategoryResult& r = report.categories[c];
    r.category = c;
    r.words_to_correct = it->second.words_to_correct;
    r.error_count = it->second.error_count;
    r.er_percent = ComputeErPercent(r.words_to_correct, source_word_count);
    r.score = ComputeCategoryScore(r.er_percent, weights[c]);
    scores[Index(c)] = r.score;
    ratios[Index(c)] = r.er_percent;
  }
  report.overall_score = ComputeOverallScore(scores);
  report.overall_er_percent = ComputeOverallEr(ratios);
  report.rating = bands.Classify(report.overall_score);
  return report;
}

ScoreReport AssembleReport(const std::map<Category, std::int64_t>& words,
                           std::int64_t source_word_count,
                           const WeightProfile& weights,
                           const RatingBands& bands) {
  std::map<Category, CategoryTally> tallies;
  for (const auto& [c, w] : words) tallies[c] = CategoryTally{w, 0};
  return AssembleReport(tallies, source_word_count, weights, bands);
}

std::string ClassifyRating(int overall_score, const RatingBands& bands) {
  return bands.Classify(overall_score);
}

}  // namespace cater
