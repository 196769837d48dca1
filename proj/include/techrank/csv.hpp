#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace techrank::csv {

struct Record {
    std::vector<std::string> fields;
    std::size_t line;  // 1-based line number where the record starts
};

/// Parses comma-separated text with double-quote quoting: quoted fields may
/// contain commas, doubled quotes and newlines. CR directly before LF is
/// dropped; blank lines produce no record. Throws ParseError on an unclosed
/// quote or stray characters after a closing quote.
std::vector<Record> parse(std::string_view text);

// Quotes the field iff it contains a comma, quote, CR or LF.
std::string escape(std::string_view field);

// Shortest representation that round-trips through parsing.
std::string format_double(double value);

std::string trim(std::string_view s);

}  // namespace techrank::csv
