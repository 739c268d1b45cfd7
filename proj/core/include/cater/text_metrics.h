#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace cater {

// How the denominator of the edit ratio ("original word count") is derived
// from the source text.
class WordCountPolicy {
 public:
  enum class Kind {
    kWhitespace,    // maximal runs of non-whitespace
    kUnicodeWords,  // UAX #29 word tokens holding a letter or digit
    kCjkAware,      // kUnicodeWords, but one token per Han/Kana/Hangul grapheme
    kExplicit,      // caller-supplied count
  };

  static WordCountPolicy Whitespace() { return WordCountPolicy(Kind::kWhitespace, 0); }
  static WordCountPolicy UnicodeWords() { return WordCountPolicy(Kind::kUnicodeWords, 0); }
  static WordCountPolicy CjkAware() { return WordCountPolicy(Kind::kCjkAware, 0); }
  // Throws InvalidInputError unless count >= 1.
  static WordCountPolicy Explicit(std::int64_t count);

  // "whitespace", "unicode", "cjk" or "explicit:N".
  static WordCountPolicy Parse(std::string_view text);
  std::string ToString() const;

  Kind kind() const { return kind_; }
  std::int64_t explicit_count() const { return count_; }

  friend bool operator==(const WordCountPolicy&, const WordCountPolicy&) = default;

 private:
  WordCountPolicy(Kind kind, std::int64_t count) : kind_(kind), count_(count) {}

  Kind kind_;
  std::int64_t count_;
};

// Text is UTF-8. Never throws for valid UTF-8; empty text counts 0.
std::int64_t CountWords(std::string_view text, const WordCountPolicy& policy);

// The tokens CountWords counts, in text order. Throws InvalidInputError for
// the explicit policy, which has no tokenization.
std::vector<std::string> Tokenize(std::string_view text,
                                  const WordCountPolicy& policy);

// kCjkAware when at least 10% of alphabetic characters are Han, Hiragana,
// Katakana or Hangul; kUnicodeWords otherwise.
WordCountPolicy DefaultPolicyFor(std::string_view text);

// Unicode-aware full lowercase of UTF-8 text.
std::string FoldCase(std::string_view text);

}  // namespace cater
