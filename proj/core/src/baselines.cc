#include "cater/baselines.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "cater/error.h"

namespace cater {

namespace {

using Ids = std::vector<int>;

// Maps the tokens of both sequences to dense integer ids.
std::pair<Ids, Ids> Intern(std::span<const std::string> a, std::span<const std::string> b) {
  std::unordered_map<std::string_view, int> ids;
  auto map = [&](std::span<const std::string> seq) {
    Ids out;
    out.reserve(seq.size());
    for (const std::string& tok : seq) {
      auto [it, inserted] = ids.emplace(tok, static_cast<int>(ids.size()));
      out.push_back(it->second);
    }
    return out;
  };
  Ids first = map(a);
  Ids second = map(b);
  return {std::move(first), std::move(second)};
}

std::int64_t Levenshtein(const Ids& a, const Ids& b, std::vector<std::int64_t>& row) {
  row.resize(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = static_cast<std::int64_t>(j);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::int64_t diag = row[0];
    row[0] = static_cast<std::int64_t>(i);
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::int64_t up = row[j];
      row[j] = std::min({up + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

bool OccursIn(const Ids& ref, const Ids& hyp, std::size_t begin, std::size_t len) {
  if (len > ref.size()) return false;
  for (std::size_t r = 0; r + len <= ref.size(); ++r) {
    if (std::equal(hyp.begin() + begin, hyp.begin() + begin + len, ref.begin() + r)) {
      return true;
    }
  }
  return false;
}

// Moves hyp[begin, begin+len) so that it starts at dest in the sequence that
// remains after removing it.
Ids ApplyShift(const Ids& hyp, std::size_t begin, std::size_t len, std::size_t dest) {
  Ids rest;
  rest.reserve(hyp.size());
  rest.insert(rest.end(), hyp.begin(), hyp.begin() + begin);
  rest.insert(rest.end(), hyp.begin() + begin + len, hyp.end());
  Ids out;
  out.reserve(hyp.size());
  out.insert(out.end(), rest.begin(), rest.begin() + dest);
  out.insert(out.end(), hyp.begin() + begin, hyp.begin() + begin + len);
  out.insert(out.end(), rest.begin() + dest, rest.end());
  return out;
}

void CountEdits(const Ids& hyp, const Ids& ref, TerBreakdown& out) {
  const std::size_t n = hyp.size();
  const std::size_t m = ref.size();
  std::vector<std::int64_t> dp((n + 1) * (m + 1));
  auto at = [&](std::size_t i, std::size_t j) -> std::int64_t& { return dp[i * (m + 1) + j]; };
  for (std::size_t i = 0; i <= n; ++i) at(i, 0) = static_cast<std::int64_t>(i);
  for (std::size_t j = 0; j <= m; ++j) at(0, j) = static_cast<std::int64_t>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      at(i, j) = std::min({at(i - 1, j) + 1, at(i, j - 1) + 1,
                           at(i - 1, j - 1) + (hyp[i - 1] == ref[j - 1] ? 0 : 1)});
    }
  }
  std::size_t i = n;
  std::size_t j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      const std::int64_t cost = hyp[i - 1] == ref[j - 1] ? 0 : 1;
      if (at(i, j) == at(i - 1, j - 1) + cost) {
        out.substitutions += cost;
        --i;
        --j;
        continue;
      }
    }
    if (i > 0 && at(i, j) == at(i - 1, j) + 1) {
      ++out.deletions;
      --i;
    } else {
      ++out.insertions;
      --j;
    }
  }
}

}  // namespace

TokenSequence MakeTokenSequence(std::string_view text, const WordCountPolicy& policy,
                                bool fold_case) {
  TokenSequence seq;
  seq.policy = policy;
  seq.tokens = Tokenize(fold_case ? std::string_view(FoldCase(text)) : text, policy);
  return seq;
}

std::int64_t EditDistance(std::span<const std::string> a, std::span<const std::string> b) {
  auto [ia, ib] = Intern(a, b);
  std::vector<std::int64_t> row;
  return Levenshtein(ia, ib, row);
}

double Bleu(const TokenSequence& candidate, std::span<const TokenSequence> references,
            int max_n) {
  if (max_n < 1) throw InvalidInputError("BLEU order must be at least 1");
  if (candidate.empty()) throw InvalidInputError("BLEU candidate is empty");
  const bool any_reference = std::any_of(references.begin(), references.end(),
                                         [](const TokenSequence& r) { return !r.empty(); });
  if (!any_reference) throw InvalidInputError("BLEU needs a non-empty reference");

  using Ngram = std::vector<std::string>;
  auto ngram_counts = [](const std::vector<std::string>& toks, int n) {
    std::map<Ngram, std::int64_t> counts;
    for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= toks.size(); ++i) {
      ++counts[Ngram(toks.begin() + i, toks.begin() + i + n)];
    }
    return counts;
  };

  std::vector<std::int64_t> matches(max_n);
  std::vector<std::int64_t> totals(max_n);
  for (int n = 1; n <= max_n; ++n) {
    const auto cand = ngram_counts(candidate.tokens, n);
    std::map<Ngram, std::int64_t> max_ref;
    for (const TokenSequence& ref : references) {
      for (const auto& [g, c] : ngram_counts(ref.tokens, n)) {
        max_ref[g] = std::max(max_ref[g], c);
      }
    }
    for (const auto& [g, c] : cand) {
      auto it = max_ref.find(g);
      matches[n - 1] += std::min(c, it == max_ref.end() ? 0 : it->second);
      totals[n - 1] += c;
    }
  }

  if (matches[0] == 0) return 0.0;
  const bool smooth = std::any_of(matches.begin() + 1, matches.end(),
                                  [](std::int64_t m) { return m == 0; });
  double log_sum = 0.0;
  for (int n = 1; n <= max_n; ++n) {
    const std::int64_t add = (smooth && n >= 2) ? 1 : 0;
    log_sum += std::log(static_cast<double>(matches[n - 1] + add) /
                        static_cast<double>(totals[n - 1] + add));
  }

  const auto c = static_cast<std::int64_t>(candidate.size());
  std::int64_t closest = -1;
  for (const TokenSequence& ref : references) {
    if (ref.empty()) continue;
    const auto r = static_cast<std::int64_t>(ref.size());
    if (closest < 0 || std::llabs(r - c) < std::llabs(closest - c) ||
        (std::llabs(r - c) == std::llabs(closest - c) && r < closest)) {
      closest = r;
    }
  }
  const double bp =
      c >= closest ? 1.0 : std::exp(1.0 - static_cast<double>(closest) / static_cast<double>(c));
  return std::clamp(bp * std::exp(log_sum / max_n), 0.0, 1.0);
}

TerBreakdown Ter(const TokenSequence& hypothesis, const TokenSequence& reference) {
  if (reference.empty()) throw InvalidInputError("TER reference is empty");
  auto [hyp, ref] = Intern(hypothesis.tokens, reference.tokens);

  TerBreakdown out;
  out.reference_length = static_cast<std::int64_t>(ref.size());
  std::vector<std::int64_t> row;
  std::int64_t current = Levenshtein(hyp, ref, row);

  while (current > 0) {
    struct Best {
      std::int64_t distance;
      std::size_t len, begin, dest;
    };
    std::optional<Best> best;
    const std::size_t n = hyp.size();
    for (std::size_t begin = 0; begin < n; ++begin) {
      const std::size_t max_len = std::min(kMaxShiftLength, n - begin);
      for (std::size_t len = 1; len <= max_len; ++len) {
        if (!OccursIn(ref, hyp, begin, len)) break;  // longer blocks cannot occur either
        for (std::size_t dest = 0; dest + len <= n; ++dest) {
          if (dest == begin) continue;
          const std::int64_t d = Levenshtein(ApplyShift(hyp, begin, len, dest), ref, row);
          const bool better =
              !best || d < best->distance ||
              (d == best->distance &&
               (len > best->len ||
                (len == best->len &&
                 (begin < best->begin || (begin == best->begin && dest < best->dest)))));
          if (better) best = Best{d, len, begin, dest};
        }
      }
    }
    // A shift costs one edit, so it must remove at least two.
    if (!best || best->distance + 1 >= current) break;
    hyp = ApplyShift(hyp, best->begin, best->len, best->dest);
    current = best->distance;
    ++out.shifts;
  }

  CountEdits(hyp, ref, out);
  return out;
}

ComparisonRow CompareMetrics(std::string id, std::string_view translation,
                             std::span<const std::string> references,
                             const ScoreReport& cater_report,
                             const CompareOptions& options) {
  ComparisonRow row;
  row.id = std::move(id);
  row.cater_overall = cater_report.overall_score;
  row.cater_er = cater_report.overall_er_percent;
  for (Category c : kAllCategories) {
    row.category_scores[c] = cater_report.categories[c].score;
  }

  WordCountPolicy policy = options.policy.value_or(DefaultPolicyFor(translation));
  if (policy.kind() == WordCountPolicy::Kind::kExplicit) {
    policy = DefaultPolicyFor(translation);
  }
  std::vector<TokenSequence> refs;
  for (const std::string& r : references) {
    TokenSequence seq = MakeTokenSequence(r, policy, options.fold_case);
    if (!seq.empty()) refs.push_back(std::move(seq));
  }
  if (refs.empty()) return row;

  const TokenSequence hyp = MakeTokenSequence(translation, policy, options.fold_case);
  row.bleu = hyp.empty() ? 0.0 : Bleu(hyp, refs);
  for (const TokenSequence& ref : refs) {
    const double t = Ter(hyp, ref).ter();
    if (!row.ter || t < *row.ter) row.ter = t;
  }
  return row;
}

}  // namespace cater
