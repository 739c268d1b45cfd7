#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cater/scoring.h"
#include "cater/text_metrics.h"

namespace cater {

struct TokenSequence {
  std::vector<std::string> tokens;
  WordCountPolicy policy = WordCountPolicy::UnicodeWords();

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
};

// Tokenizes with policy (which must not be explicit); fold_case applies
// Unicode case folding to every token.
TokenSequence MakeTokenSequence(std::string_view text, const WordCountPolicy& policy,
                                bool fold_case = false);

// Sentence-level BLEU: uniform-weight geometric mean of clipped n-gram
// precisions (n = 1..max_n) times the brevity penalty against the closest
// reference length (shorter wins ties). When any order n >= 2 has zero
// matches, every order n >= 2 gets add-one smoothing. Result in [0, 1].
// Throws InvalidInputError for an empty candidate, no non-empty reference or
// max_n < 1.
double Bleu(const TokenSequence& candidate, std::span<const TokenSequence> references,
            int max_n = 4);

struct TerBreakdown {
  std::int64_t insertions = 0;
  std::int64_t deletions = 0;
  std::int64_t substitutions = 0;
  std::int64_t shifts = 0;
  std::int64_t reference_length = 1;

  std::int64_t edits() const { return insertions + deletions + substitutions + shifts; }
  double ter() const {
    return static_cast<double>(edits()) / static_cast<double>(reference_length);
  }
};

// Longest block the shift search will move.
inline constexpr std::size_t kMaxShiftLength = 10;

// Translation edit rate. Block shifts (cost 1) are searched greedily: each
// round applies the shift that lowers the edit distance the most (ties: longer
// block, then leftmost origin, then leftmost destination), and only while it
// lowers shifts + edit distance. A block may move only if it occurs verbatim
// in the reference. Throws InvalidInputError for an empty reference.
TerBreakdown Ter(const TokenSequence& hypothesis, const TokenSequence& reference);

// Levenshtein distance with unit costs.
std::int64_t EditDistance(std::span<const std::string> a, std::span<const std::string> b);

struct ComparisonRow {
  std::string id;
  int cater_overall = 0;
  EditRatio cater_er;
  PerCategory<int> category_scores;
  // Absent when no references were supplied.
  std::optional<double> bleu;
  std::optional<double> ter;
};

struct CompareOptions {
  // Tokenization for the baselines; derived from the translation when unset.
  std::optional<WordCountPolicy> policy;
  bool fold_case = false;
};

// One flat row. TER uses the reference giving the lowest rate. Empty
// references are ignored.
ComparisonRow CompareMetrics(std::string id, std::string_view translation,
                             std::span<const std::string> references,
                             const ScoreReport& cater_report,
                             const CompareOptions& options = {});

}  // namespace cater
