#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace layoutminer::csv {

using Row = std::vector<std::string>;

// RFC-4180 field quoting: fields containing a comma, quote, CR or LF are
// wrapped in quotes with embedded quotes doubled.
std::string escape(std::string_view field);
std::string format_row(const Row& row);

// Parses a whole document. Accepts LF or CRLF row endings. Throws
// Error(SchemaMismatch) on an unterminated quoted field.
std::vector<Row> parse(std::string_view text);

}  // namespace layoutminer::csv
