#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace cater::cli {

// RFC 4180 field quoting: quoted only when it holds a comma, quote, CR or LF.
std::string CsvField(std::string_view value);
std::string CsvRow(const std::vector<std::string>& fields);

// Parses RFC 4180 text (CRLF or LF line ends, quoted fields may span lines).
// Throws InvalidInputError on an unterminated quote or stray text after one.
std::vector<std::vector<std::string>> ParseCsv(std::string_view text);

}  // namespace cater::cli
