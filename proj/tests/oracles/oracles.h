#pragma once

// Reference implementations used only by tests. They deliberately share no
// code with the library: scores go through boost::rational, n-grams through
// plain nested loops, TER through exhaustive breadth-first search.

#include <cstdint>
#include <string>
#include <vector>

#include <boost/rational.hpp>

namespace cater::oracle {

using Rational = boost::rational<std::int64_t>;

// One-decimal ER% (half-up) as an exact rational.
Rational ErPercent(std::int64_t words, std::int64_t count);

// Category score from an exact ER% and weight.
int CategoryScore(const Rational& er_percent, const Rational& weight);

// Composition of the two above.
int CategoryScore(std::int64_t words, std::int64_t count, const Rational& weight);

// Sentence BLEU with the library's smoothing rule, via explicit enumeration.
double Bleu(const std::vector<std::string>& candidate,
            const std::vector<std::vector<std::string>>& references, int max_n = 4);

// Full-matrix Levenshtein distance.
std::int64_t EditDistance(const std::vector<int>& a, const std::vector<int>& b);

// Minimum over every sequence of block shifts (each block of length <= 10 that
// occurs verbatim in ref, moved anywhere) of shifts + edit distance.
std::int64_t ExhaustiveTerEdits(const std::vector<int>& hyp, const std::vector<int>& ref);

// Same search restricted to at most one shift.
std::int64_t SingleShiftTerEdits(const std::vector<int>& hyp, const std::vector<int>& ref);

}  // namespace cater::oracle
