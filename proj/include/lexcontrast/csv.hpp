#ifndef LEXCONTRAST_CSV_HPP
#define LEXCONTRAST_CSV_HPP

// RFC-4180 reading and writing.

#include <lexcontrast/error.hpp>

#include <cstddef>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace lexcontrast::csv {

using Row = std::vector<std::string>;

/// Parses a whole CSV document. Quoted fields may contain commas, doubled quotes and
/// line breaks. Both LF and CRLF record terminators are accepted. A trailing empty
/// line does not produce a record.
inline std::vector<Row> parse(std::string_view text)
{
    std::vector<Row> rows;
    Row row;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;
    std::size_t line = 1;

    // skip a UTF-8 byte order mark
    if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF")
        text.remove_prefix(3);

    auto end_field = [&] {
        row.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_record = [&] {
        end_field();
        rows.push_back(std::move(row));
        row.clear();
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n')
                    ++line;
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
        case '"':
            if (field_started && !field.empty())
                throw ParseError("csv: stray quote inside unquoted field", line);
            in_quotes = true;
            field_started = true;
            break;
        case ',':
            end_field();
            field_started = true; // a following record end still yields an empty last field
            break;
        case '\r':
            if (i + 1 < text.size() && text[i + 1] == '\n')
                ++i;
            end_record();
            ++line;
            break;
        case '\n':
            end_record();
            ++line;
            break;
        default:
            field.push_back(c);
            field_started = true;
        }
    }
    if (in_quotes)
        throw ParseError("csv: unterminated quoted field", line);
    if (field_started || !field.empty() || !row.empty())
        end_record();
    return rows;
}

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open file: " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::vector<Row> read(const std::string& path) { return parse(read_file(path)); }

inline std::string quote(std::string_view field)
{
    bool needs = field.find_first_of(",\"\r\n") != std::string_view::npos;
    if (!needs)
        return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"')
            out += "\"\"";
        else
            out.push_back(c);
    }
    out.push_back('"');
    return out;
}

inline void write_row(std::ostream& out, const Row& row)
{
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i)
            out << ',';
        out << quote(row[i]);
    }
    out << '\n';
}

inline std::string format(const std::vector<Row>& rows)
{
    std::ostringstream out;
    for (const auto& r : rows)
        write_row(out, r);
    return out.str();
}

/// Column lookup by header name; returns npos when absent.
inline std::size_t column_index(const Row& header, std::string_view name)
{
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name)
            return i;
    return static_cast<std::size_t>(-1);
}

} // namespace lexcontrast::csv

#endif
