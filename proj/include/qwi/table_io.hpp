#pragma once

#include <string>
#include <vector>

namespace qwi {

// 17 significant digits: enough to reproduce any double exactly on re-parse.
std::string format_g17(double v);

// Minimal CSV assembly: fixed header, LF line endings, no quoting (all cells
// are numbers or plain identifiers).
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);
    void add_row(std::vector<std::string> cells);
    std::string str() const;
    std::size_t rows() const { return rows_.size(); }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

// Write via a temporary in the same directory and rename over the target, so
// readers never observe a half-written file.
void write_text_atomic(const std::string& path, const std::string& content);

} // namespace qwi
