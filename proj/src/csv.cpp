#include "techrank/csv.hpp"

#include <charconv>
#include <system_error>

#include "techrank/errors.hpp"

namespace techrank::csv {

std::vector<Record> parse(std::string_view text) {
    std::vector<Record> records;
    std::vector<std::string> fields;
    std::string field;
    bool in_quotes = false;
    bool field_was_quoted = false;
    bool record_has_content = false;  // anything beyond a bare newline
    std::size_t line = 1;
    std::size_t record_line = 1;

    auto end_field = [&] {
        fields.push_back(std::move(field));
        field.clear();
        field_was_quoted = false;
    };
    auto end_record = [&] {
        if (record_has_content) {
            end_field();
            records.push_back({std::move(fields), record_line});
            fields.clear();
        }
        record_has_content = false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        char ch = text[i];
        if (in_quotes) {
            if (ch == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (ch == '\n') ++line;
                field.push_back(ch);
            }
            continue;
        }
        switch (ch) {
            case '"':
                if (field.empty() && !field_was_quoted) {
                    in_quotes = true;
                    field_was_quoted = true;
                    record_has_content = true;
                } else if (field_was_quoted) {
                    throw ParseError(line, "unexpected character after closing quote");
                } else {
                    field.push_back(ch);  // quote inside unquoted field: literal
                    record_has_content = true;
                }
                break;
            case ',':
                end_field();
                record_has_content = true;
                break;
            case '\r':
                if (i + 1 < text.size() && text[i + 1] == '\n') break;  // CRLF
                if (field_was_quoted) {
                    throw ParseError(line, "unexpected character after closing quote");
                }
                field.push_back(ch);
                record_has_content = true;
                break;
            case '\n':
                end_record();
                ++line;
                record_line = line;
                break;
            default:
                if (field_was_quoted) {
                    throw ParseError(line, "unexpected character after closing quote");
                }
                field.push_back(ch);
                record_has_content = true;
                break;
        }
    }
    if (in_quotes) throw ParseError(record_line, "unterminated quoted field");
    end_record();
    return records;
}

std::string escape(std::string_view field) {
    bool needs_quotes = field.find_first_of(",\"\r\n") != std::string_view::npos;
    if (!needs_quotes) return std::string(field);
    std::string out;
    out.reserve(field.size() + 2);
    out.push_back('"');
    for (char ch : field) {
        if (ch == '"') out.push_back('"');
        out.push_back(ch);
    }
    out.push_back('"');
    return out;
}

std::string format_double(double value) {
    char buffer[64];
    auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, result.ptr);
}

std::string trim(std::string_view s) {
    std::size_t begin = 0;
    std::size_t end = s.size();
    while (begin < end && (s[begin] == ' ' || s[begin] == '\t' || s[begin] == '\r' ||
                           s[begin] == '\n' || s[begin] == '\f' || s[begin] == '\v')) {
        ++begin;
    }
    while (end > begin && (s[end - 1] == ' ' || s[end - 1] == '\t' || s[end - 1] == '\r' ||
                           s[end - 1] == '\n' || s[end - 1] == '\f' || s[end - 1] == '\v')) {
        --end;
    }
    return std::string(s.substr(begin, end - begin));
}

}  // namespace techrank::csv
