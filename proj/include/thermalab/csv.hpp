#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace thermalab {

// Shortest round-trip decimal form of a double ('.' decimal point, no
// locale); integers format without an exponent where possible.
std::string csv_num(double v);
std::string csv_int(long long v);

// Small deterministic CSV table: UTF-8, header row, one line per row, '\n'
// terminators. Cells are pre-formatted strings so callers control precision.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);

    void add_row(std::vector<std::string> cells);
    std::size_t rows() const { return rows_.size(); }
    std::string to_string() const;
    void save(const std::filesystem::path& file) const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

}  // namespace thermalab
