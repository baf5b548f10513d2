#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace newscat::csv {

using Row = std::vector<std::string>;

// RFC 4180 reader: comma separated, double-quoted fields may contain commas,
// line breaks and doubled quotes. Accepts LF or CRLF and a leading UTF-8 BOM.
std::vector<Row> parse(std::istream& in);
std::vector<Row> read_file(const std::string& path);

// Quotes a field only when it contains a comma, quote or line break.
std::string escape_field(const std::string& field);
void write_row(std::ostream& out, const Row& row);

}  // namespace newscat::csv
