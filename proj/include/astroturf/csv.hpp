#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace astroturf::csv {

using Row = std::vector<std::string>;

struct Table {
    Row header;
    std::vector<Row> rows;

    // Index of a header column; throws DataError naming `path` when absent.
    std::size_t column(std::string_view name, const std::filesystem::path& path = {}) const;
};

// RFC-4180: fields quoted when they contain comma, quote, CR or LF.
std::string quote(std::string_view field);
void write_row(std::ostream& out, const Row& row);

// Reads a whole CSV file with header. Quoted fields may span lines.
Table read(const std::filesystem::path& path);
Table parse(std::string_view content);

// Shortest round-trip representation of a double.
std::string number(double v);

}  // namespace astroturf::csv
