#include "cater/text_metrics.h"

#include <charconv>
#include <memory>

#include <unicode/brkiter.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/uscript.h>

#include "cater/error.h"

namespace cater {

namespace {

enum class BreakKind { kWord, kCharacter };

// BreakIterator construction loads rule data; keep one clone per thread.
icu::BreakIterator& ThreadIterator(BreakKind kind) {
  thread_local std::unique_ptr<icu::BreakIterator> word;
  thread_local std::unique_ptr<icu::BreakIterator> character;
  auto& slot = kind == BreakKind::kWord ? word : character;
  if (!slot) {
    UErrorCode status = U_ZERO_ERROR;
    slot.reset(kind == BreakKind::kWord
                   ? icu::BreakIterator::createWordInstance(icu::Locale::getRoot(), status)
                   : icu::BreakIterator::createCharacterInstance(
                         icu::Locale::getRoot(), status));
    if (U_FAILURE(status) || !slot) {
      throw Error(std::string("ICU break iterator unavailable: ") +
                  u_errorName(status));
    }
  }
  return *slot;
}

bool IsWordChar(UChar32 c) {
  return u_hasBinaryProperty(c, UCHAR_ALPHABETIC) || u_isdigit(c);
}

bool IsCjkLetter(UChar32 c) {
  if (!u_hasBinaryProperty(c, UCHAR_ALPHABETIC)) return false;
  return uscript_hasScript(c, USCRIPT_HAN) ||
         uscript_hasScript(c, USCRIPT_HIRAGANA) ||
         uscript_hasScript(c, USCRIPT_KATAKANA) ||
         uscript_hasScript(c, USCRIPT_HANGUL);
}

bool HasWordChar(const icu::UnicodeString& s, int32_t begin, int32_t end) {
  for (int32_t i = begin; i < end;) {
    const UChar32 c = s.char32At(i);
    if (IsWordChar(c)) return true;
    i += U16_LENGTH(c);
  }
  return false;
}

std::string ToUtf8(const icu::UnicodeString& s, int32_t begin, int32_t end) {
  std::string out;
  s.tempSubStringBetween(begin, end).toUTF8String(out);
  return out;
}

using TokenSink = std::vector<std::string>*;

// Appends UAX #29 word tokens of s[begin, end) to sink (if given) and returns
// how many there were.
std::int64_t SegmentWords(const icu::UnicodeString& s, int32_t begin, int32_t end,
                          TokenSink sink) {
  if (begin >= end) return 0;
  const icu::UnicodeString part = s.tempSubStringBetween(begin, end);
  icu::BreakIterator& it = ThreadIterator(BreakKind::kWord);
  it.setText(part);
  std::int64_t count = 0;
  int32_t start = it.first();
  for (int32_t stop = it.next(); stop != icu::BreakIterator::DONE;
       start = stop, stop = it.next()) {
    if (!HasWordChar(part, start, stop)) continue;
    ++count;
    if (sink) sink->push_back(ToUtf8(part, start, stop));
  }
  return count;
}

std::int64_t SegmentWhitespace(const icu::UnicodeString& s, TokenSink sink) {
  std::int64_t count = 0;
  int32_t token_start = -1;
  const int32_t n = s.length();
  for (int32_t i = 0; i <= n;) {
    const bool at_end = i == n;
    const UChar32 c = at_end ? 0 : s.char32At(i);
    const bool space = at_end || u_isUWhiteSpace(c);
    if (space && token_start >= 0) {
      ++count;
      if (sink) sink->push_back(ToUtf8(s, token_start, i));
      token_start = -1;
    } else if (!space && token_start < 0) {
      token_start = i;
    }
    if (at_end) break;
    i += U16_LENGTH(c);
  }
  return count;
}

std::int64_t SegmentCjkAware(const icu::UnicodeString& s, TokenSink sink) {
  // Graphemes are walked once; non-CJK stretches are buffered and handed to
  // the word segmenter whenever a CJK grapheme interrupts them.
  icu::BreakIterator& it = ThreadIterator(BreakKind::kCharacter);
  it.setText(s);
  std::int64_t count = 0;
  int32_t run_start = 0;
  int32_t start = it.first();
  for (int32_t stop = it.next(); stop != icu::BreakIterator::DONE;
       start = stop, stop = it.next()) {
    if (!IsCjkLetter(s.char32At(start))) continue;
    count += SegmentWords(s, run_start, start, sink);
    // SegmentWords resets the shared word iterator, not this one.
    ++count;
    if (sink) sink->push_back(ToUtf8(s, start, stop));
    run_start = stop;
  }
  count += SegmentWords(s, run_start, s.length(), sink);
  return count;
}

std::int64_t Segment(std::string_view text, const WordCountPolicy& policy,
                     TokenSink sink) {
  if (policy.kind() == WordCountPolicy::Kind::kExplicit) {
    return policy.explicit_count();
  }
  const icu::UnicodeString s = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  switch (policy.kind()) {
    case WordCountPolicy::Kind::kWhitespace:
      return SegmentWhitespace(s, sink);
    case WordCountPolicy::Kind::kUnicodeWords:
      return SegmentWords(s, 0, s.length(), sink);
    case WordCountPolicy::Kind::kCjkAware:
      return SegmentCjkAware(s, sink);
    case WordCountPolicy::Kind::kExplicit:
      break;
  }
  return policy.explicit_count();
}

}  // namespace

WordCountPolicy WordCountPolicy::Explicit(std::int64_t count) {
  if (count < 1) {
    throw InvalidInputError("explicit word count must be at least 1, got " +
                            std::to_string(count));
  }
  return WordCountPolicy(Kind::kExplicit, count);
}

WordCountPolicy WordCountPolicy::Parse(std::string_view text) {
  if (text == "whitespace") return Whitespace();
  if (text == "unicode") return UnicodeWords();
  if (text == "cjk") return CjkAware();
  constexpr std::string_view kExplicitPrefix = "explicit:";
  if (text.starts_with(kExplicitPrefix)) {
    const std::string_view digits = text.substr(kExplicitPrefix.size());
    std::int64_t n = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
    if (ec == std::errc() && ptr == digits.data() + digits.size()) {
      return Explicit(n);
    }
  }
  throw InvalidInputError("unknown word count policy '" + std::string(text) +
                          "' (expected whitespace|unicode|cjk|explicit:N)");
}

std::string WordCountPolicy::ToString() const {
  switch (kind_) {
    case Kind::kWhitespace:
      return "whitespace";
    case Kind::kUnicodeWords:
      return "unicode";
    case Kind::kCjkAware:
      return "cjk";
    case Kind::kExplicit:
      return "explicit:" + std::to_string(count_);
  }
  return "unicode";
}

std::int64_t CountWords(std::string_view text, const WordCountPolicy& policy) {
  return Segment(text, policy, nullptr);
}

std::vector<std::string> Tokenize(std::string_view text,
                                  const WordCountPolicy& policy) {
  if (policy.kind() == WordCountPolicy::Kind::kExplicit) {
    throw InvalidInputError("the explicit word count policy cannot tokenize text");
  }
  std::vector<std::string> tokens;
  Segment(text, policy, &tokens);
  return tokens;
}

WordCountPolicy DefaultPolicyFor(std::string_view text) {
  const icu::UnicodeString s = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  std::int64_t letters = 0;
  std::int64_t cjk = 0;
  for (int32_t i = 0; i < s.length();) {
    const UChar32 c = s.char32At(i);
    if (u_hasBinaryProperty(c, UCHAR_ALPHABETIC)) {
      ++letters;
      if (IsCjkLetter(c)) ++cjk;
    }
    i += U16_LENGTH(c);
  }
  if (letters > 0 && cjk * 10 >= letters) return WordCountPolicy::CjkAware();
  return WordCountPolicy::UnicodeWords();
}

std::string FoldCase(std::string_view text) {
  icu::UnicodeString s = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  s.foldCase();
  std::string out;
  s.toUTF8String(out);
  return out;
}

}  // namespace cater
