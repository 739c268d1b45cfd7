// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <array>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "cater/baselines.h"
#include "cater/error.h"
#include "cater/protocol.h"
#include "cater/scoring.h"
#include "cater/text_metrics.h"
#include "cli_harness.h"
#include "oracles.h"

namespace {

using namespace cater;
using namespace cater::testing;
using Json = nlohmann::json;

// Every criterion is checked with exact equality.
constexpr std::int64_t kScoreTolerance = 0;
constexpr double kMetricTolerance = 0.0;
constexpr std::uint64_t kSeed = 20240611;

struct Outcome {
  bool pass = true;
  std::string detail;
};

Weight HalfSteps(int halves) { return Weight::FromMicros(halves * Weight::kScale / 2); }

const std::array<int, 7> kWeightHalves = {0, 1, 2, 4, 6, 8, 10};  // 0, 0.5, 1..5

Outcome PublishedExample() {
  const EditRatio er = ComputeErPercent(6, 100);
  const int score = ComputeCategoryScore(EditRatio::FromTenths(60), Weight::FromInteger(4));
  Outcome o;
  o.pass = er.tenths() == 60 && std::llabs(score - 76) <= kScoreTolerance;
  o.detail = "ER%(6,100)=" + er.ToString() + ", score(6.0,4)=" + std::to_string(score);
  return o;
}

Outcome EdgeRules() {
  int failures = 0;
  for (int h : kWeightHalves) {
    if (ComputeCategoryScore(ComputeErPercent(0, 37), HalfSteps(h)) != 100) ++failures;
    if (ComputeCategoryScore(EditRatio::FromTenths(1001), HalfSteps(h)) != 0) ++failures;
    if (ComputeCategoryScore(ComputeErPercent(31, 30), HalfSteps(h)) != 0) ++failures;
  }
  const std::array<int, 5> perfect = {100, 100, 100, 100, 100};
  if (ComputeOverallScore(perfect) != 100) ++failures;
  const std::array<int, 5> low = {90, 80, 70, 60, 99};  // 399
  if (ComputeOverallScore(low) != 0) ++failures;
  const std::array<int, 5> zero = {0, 0, 0, 0, 0};
  if (ComputeOverallScore(zero) != 0) ++failures;
  return {failures == 0, std::to_string(failures) + " violations of 24 checks"};
}

Outcome OracleEquivalence() {
  int cases = 0;
  int mismatches = 0;
  for (int words = 0; words <= 30; ++words) {
    for (int count = 1; count <= 30; ++count) {
      for (int h : kWeightHalves) {
        ++cases;
        const int got = ComputeCategoryScore(ComputeErPercent(words, count), HalfSteps(h));
        const int want = oracle::CategoryScore(words, count, oracle::Rational(h, 2));
        if (std::llabs(got - want) > kScoreTolerance) ++mismatches;
      }
    }
  }
  return {mismatches == 0,
          std::to_string(cases) + " cases, " + std::to_string(mismatches) + " mismatches"};
}

Outcome Monotonicity() {
  std::mt19937_64 rng(kSeed);
  std::uniform_int_distribution<std::int64_t> tenths(0, 1200);
  std::uniform_int_distribution<std::int64_t> micros(0, 10 * Weight::kScale);
  std::uniform_int_distribution<std::int64_t> step(1, 200);
  int violations = 0;
  for (int i = 0; i < 10000; ++i) {
    const EditRatio er = EditRatio::FromTenths(tenths(rng));
    const Weight w = Weight::FromMicros(micros(rng));
    const int base = ComputeCategoryScore(er, w);
    const EditRatio er_up = EditRatio::FromTenths(er.tenths() + step(rng));
    if (ComputeCategoryScore(er_up, w) > base) ++violations;
    const EditRatio er_pos = EditRatio::FromTenths(std::max<std::int64_t>(1, er.tenths()));
    const Weight w_up = Weight::FromMicros(w.micros() + step(rng) * 1000);
    if (ComputeCategoryScore(er_pos, w_up) > ComputeCategoryScore(er_pos, w)) ++violations;
  }
  return {violations == 0, "10000 pairs, " + std::to_string(violations) + " violations"};
}

Outcome Additivity() {
  std::mt19937_64 rng(kSeed + 1);
  std::uniform_int_distribution<std::int64_t> tenths(0, 1500);
  int violations = 0;
  for (int i = 0; i < 1000; ++i) {
    std::array<EditRatio, 5> ers;
    std::int64_t sum = 0;
    for (auto& e : ers) {
      e = EditRatio::FromTenths(tenths(rng));
      sum += e.tenths();
    }
    if (ComputeOverallEr(ers).tenths() != sum) ++violations;
  }
  return {violations == 0, "1000 tuples, " + std::to_string(violations) + " violations"};
}

std::string RandomText(std::mt19937_64& rng, bool non_empty) {
  static const std::vector<std::string> kPieces = {
      "word", " ", "\"", "\\", "{", "}", "[", "]", ",", ":", "\n", "\t", "é", "雪", "🙂",
      "x", "Quote \"inner\"", "{\"a\":1}", "/", " "};
  std::uniform_int_distribution<std::size_t> pick(0, kPieces.size() - 1);
  std::uniform_int_distribution<int> len(non_empty ? 1 : 0, 6);
  std::string s;
  for (int n = len(rng); n > 0; --n) s += kPieces[pick(rng)];
  if (non_empty && s.empty()) s = "x";
  return s;
}

ParsedEvaluation RandomEvaluation(std::mt19937_64& rng) {
  ParsedEvaluation p;
  std::uniform_int_distribution<int> count(0, 6);
  std::uniform_int_distribution<int> cat(0, 4);
  std::uniform_int_distribution<std::int64_t> words(0, 50);
  for (int n = count(rng); n > 0; --n) {
    ErrorRecord e;
    e.category = kAllCategories[static_cast<std::size_t>(cat(rng))];
    e.location = RandomText(rng, true);
    e.explanation = RandomText(rng, false);
    e.suggested_correction = RandomText(rng, false);
    e.words_to_correct = words(rng);
    p.errors.push_back(std::move(e));
  }
  std::bernoulli_distribution coin(0.5);
  std::uniform_int_distribution<std::int64_t> tenths(0, 2000);
  std::uniform_int_distribution<int> score(0, 100);
  for (Category c : kAllCategories) {
    if (!coin(rng)) continue;
    SelfReport s;
    if (coin(rng)) s.er_percent = EditRatio::FromTenths(tenths(rng));
    if (coin(rng)) s.score = score(rng);
    p.self_reported[c] = s;
  }
  return p;
}

Outcome ProtocolRoundTrip() {
  static const std::vector<std::string> kProse = {
      "",
      "Here is my evaluation:\n",
      "Sure! {draft} follows.\n```json\n",
      "Notes: braces like } and { appear here.\n",
  };
  static const std::vector<std::string> kTrailers = {
      "", "\n```\n", "\nLet me know if you need {more}.", "\n} trailing {"};
  std::mt19937_64 rng(kSeed + 2);
  int byte_failures = 0;
  int prose_failures = 0;
  for (int i = 0; i < 1000; ++i) {
    const ParsedEvaluation original = RandomEvaluation(rng);
    const std::string first = SerializeEvaluation(original);
    try {
      const ParsedEvaluation parsed = ParseResponse(first);
      if (SerializeEvaluation(parsed) != first || !(parsed == original)) ++byte_failures;
      const std::string wrapped =
          kProse[static_cast<std::size_t>(i) % kProse.size()] + first +
          kTrailers[static_cast<std::size_t>(i / 4) % kTrailers.size()];
      if (!(ParseResponse(wrapped) == parsed)) ++prose_failures;
    } catch (const cater::Error&) {
      ++byte_failures;
    }
  }
  return {byte_failures == 0 && prose_failures == 0,
          "1000 evaluations, " + std::to_string(byte_failures) + " round-trip and " +
              std::to_string(prose_failures) + " prose-wrapping failures"};
}

Outcome AuthorityCheck() {
  TempDir dir("acceptance");
  const std::string src = Words(100);
  const std::string tr = Words(100, "t");
  const std::string response =
      ResponseJson({{"SA", "t7 t8", 6}}, {{"SA", {{"er_percent", 6.0}, {"score", 80}}}});
  if (StoreFixture(dir / "replay", dir.path(), src, tr, response) != 0) {
    return {false, "fixture could not be stored"};
  }
  WriteText(dir / "src.txt", src);
  WriteText(dir / "tr.txt", tr);
  const CliResult r = RunCli({"--backend", "replay", "--replay-dir", (dir / "replay").string(),
                              "evaluate", "--source", (dir / "src.txt").string(),
                              "--translation", (dir / "tr.txt").string(), "--out",
                              (dir / "out").string()});
  if (r.code != 0) return {false, "evaluate exited " + std::to_string(r.code) + ": " + r.err};
  const fs::path session = fs::directory_iterator(dir / "out")->path();
  const Json report = Json::parse(ReadText(session / "report.json"));
  const int sa = report["categories"][1]["score"].get<int>();
  const auto& disc = report["discrepancies"];
  const bool ok = sa == 76 && disc.size() == 1 && disc[0]["category"] == "SA" &&
                  disc[0]["field"] == "score" && disc[0]["self_reported"] == 80 &&
                  disc[0]["locally_computed"] == 76;
  return {ok, "SA score " + std::to_string(sa) + ", " + std::to_string(disc.size()) +
                  " discrepancy record(s)"};
}

Outcome Baselines() {
  std::mt19937_64 rng(kSeed + 3);
  std::uniform_int_distribution<int> len(1, 30);
  std::uniform_int_distribution<int> sym(0, 9);
  int identity_failures = 0;
  for (int i = 0; i < 100; ++i) {
    TokenSequence x;
    for (int n = len(rng); n > 0; --n) x.tokens.push_back("s" + std::to_string(sym(rng)));
    const std::vector<TokenSequence> refs = {x};
    if (std::abs(Bleu(x, refs) - 1.0) > kMetricTolerance) ++identity_failures;
    if (std::abs(Ter(x, x).ter()) > kMetricTolerance) ++identity_failures;
  }

  // Every hypothesis/reference pair up to length 6 over 4 symbols, up to
  // renaming of symbols (TER is invariant under it): canonical sequences
  // introduce symbols in first-use order.
  constexpr int kMaxLen = 6;
  long pairs = 0;
  long mismatches = 0;
  std::string example;
  std::vector<int> seq;
  for (int m = 1; m <= kMaxLen; ++m) {
    for (int n = 0; n <= kMaxLen; ++n) {
      seq.assign(static_cast<std::size_t>(m + n), 0);
      std::function<void(int, int)> visit = [&](int pos, int max_used) {
        if (pos == m + n) {
          const std::vector<int> ref(seq.begin(), seq.begin() + m);
          const std::vector<int> hyp(seq.begin() + m, seq.end());
          TokenSequence r, h;
          for (int t : ref) r.tokens.push_back(std::string(1, static_cast<char>('a' + t)));
          for (int t : hyp) h.tokens.push_back(std::string(1, static_cast<char>('a' + t)));
          ++pairs;
          const std::int64_t greedy = Ter(h, r).edits();
          const std::int64_t best = oracle::ExhaustiveTerEdits(hyp, ref);
          if (greedy != best) {
            if (mismatches == 0) {
              example = "e.g. ref=";
              for (auto& t : r.tokens) example += t;
              example += " hyp=";
              for (auto& t : h.tokens) example += t;
              example += " greedy=" + std::to_string(greedy) +
                         " optimum=" + std::to_string(best);
            }
            ++mismatches;
          }
          return;
        }
        for (int s = 0; s <= std::min(max_used + 1, 3); ++s) {
          seq[static_cast<std::size_t>(pos)] = s;
          visit(pos + 1, std::max(max_used, s));
        }
      };
      visit(0, -1);
    }
  }
  std::string detail = std::to_string(identity_failures) + " identity failures; " +
                       std::to_string(mismatches) + " of " + std::to_string(pairs) +
                       " pairs differ from the exhaustive optimum";
  if (!example.empty()) detail += " (" + example + ")";
  return {identity_failures == 0 && mismatches == 0, detail};
}

Outcome EndToEndOffline() {
  TempDir dir("acceptance");
  const fs::path replay = dir / "replay";
  WriteText(dir / "src.txt", Words(40));
  WriteText(dir / "tr.txt", Words(40, "t"));
  if (StoreFixture(replay, dir.path(), Words(40), Words(40, "t"),
                   ResponseJson({{"CF", "t3", 2}, {"LA", "t9", 1}})) != 0) {
    return {false, "fixture could not be stored"};
  }
  std::string jsonl;
  for (int i = 1; i <= 10; ++i) {
    const std::string src = Words(10 + i);
    const std::string tr = Words(10 + i, "u");
    if (StoreFixture(replay, dir.path(), src, tr,
                     ResponseJson({{i % 2 ? "IC" : "STA", "u1", i % 4}})) != 0) {
      return {false, "fixture could not be stored"};
    }
    jsonl += Json{{"id", "rec-" + std::to_string(i)}, {"source_text", src},
                  {"translation_text", tr}}
                 .dump() +
             "\n";
  }
  WriteText(dir / "batch.jsonl", jsonl);

  // Live settings point at a closed port; replay must not touch them.
  const std::vector<std::string> common = {"--backend", "replay", "--replay-dir",
                                           replay.string(), "--endpoint",
                                           "http://127.0.0.1:1/unused"};
  std::vector<std::vector<std::string>> reports(2);
  for (int run = 0; run < 2; ++run) {
    const fs::path out = dir / ("run" + std::to_string(run));
    std::vector<std::string> eval = common;
    for (const std::string& a : {std::string("evaluate"), std::string("--source"),
                                 (dir / "src.txt").string(), std::string("--translation"),
                                 (dir / "tr.txt").string(), std::string("--out"),
                                 (out / "single").string()}) {
      eval.push_back(a);
    }
    const CliResult e = RunCli(eval);
    if (e.code != 0) return {false, "evaluate exited " + std::to_string(e.code)};
    std::vector<std::string> batch = common;
    for (const std::string& a : {std::string("batch"), (dir / "batch.jsonl").string(),
                                 std::string("--out"), (out / "batch").string()}) {
      batch.push_back(a);
    }
    const CliResult b = RunCli(batch);
    if (b.code != 0 || b.out.find("10 ok, 0 failed") == std::string::npos) {
      return {false, "batch exited " + std::to_string(b.code) + ": " + b.out + b.err};
    }
    reports[static_cast<std::size_t>(run)].push_back(
        ReadText(fs::directory_iterator(out / "single")->path() / "report.json"));
    for (int i = 1; i <= 10; ++i) {
      reports[static_cast<std::size_t>(run)].push_back(ReadText(
          out / "batch" / "records" / ("rec-" + std::to_string(i)) / "report.json"));
    }
  }
  int differing = 0;
  for (std::size_t i = 0; i < reports[0].size(); ++i) {
    if (reports[0][i].empty() || reports[0][i] != reports[1][i]) ++differing;
  }
  return {differing == 0, "11 report.json files per run, " + std::to_string(differing) +
                              " differ between runs"};
}

Outcome WordCountPolicies() {
  int failures = 0;
  if (CountWords("Hello, world!", WordCountPolicy::UnicodeWords()) != 2) ++failures;
  if (CountWords("雪国", WordCountPolicy::CjkAware()) != 2) ++failures;
  std::mt19937_64 rng(kSeed + 4);
  std::uniform_int_distribution<std::int64_t> n(1, 1'000'000);
  for (int i = 0; i < 100; ++i) {
    const std::int64_t k = n(rng);
    if (CountWords("any text at all", WordCountPolicy::Explicit(k)) != k) ++failures;
  }
  return {failures == 0, std::to_string(failures) + " failures of 102 checks"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {1, "published example numbers", PublishedExample},
      {2, "edge rules", EdgeRules},
      {3, "rational oracle equivalence", OracleEquivalence},
      {4, "monotonicity", Monotonicity},
      {5, "overall ER% additivity", Additivity},
      {6, "protocol round-trip", ProtocolRoundTrip},
      {7, "self-reported figures are not authoritative", AuthorityCheck},
      {8, "BLEU/TER baselines", Baselines},
      {9, "offline end-to-end determinism", EndToEndOffline},
      {10, "word-count policies", WordCountPolicies},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("criterion %d %s: %s (%s)\n", c.id, o.pass ? "PASS" : "FAIL", c.name,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of 10 criteria passed\n", 10 - failed);
  return failed == 0 ? 0 : 1;
}
