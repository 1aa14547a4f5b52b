#include "report.hpp"

#include "config.hpp"

#include <cosshell/errors.hpp>

#include <fstream>
#include <sstream>

namespace cosshell::tool {

nlohmann::ordered_json stamped_json(const RunStamp& stamp) {
    nlohmann::ordered_json j;
    j["config_hash"] = stamp.config_hash;
    j["version"] = stamp.version;
    return j;
}

CsvWriter::CsvWriter(const RunStamp& stamp, std::vector<std::string> columns)
    : stamp_(stamp), columns_(std::move(columns)) {}

void CsvWriter::add_row(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(format_double(v));
    add_row_mixed(cells);
}

void CsvWriter::add_row_mixed(const std::vector<std::string>& cells) {
    if (cells.size() != columns_.size()) {
        throw Error("csv row has " + std::to_string(cells.size()) + " cells, expected " +
                    std::to_string(columns_.size()));
    }
    std::string row;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i > 0) row += ',';
        row += cells[i];
    }
    rows_.push_back(std::move(row));
}

std::string CsvWriter::str() const {
    std::ostringstream out;
    out << "# config_hash=" << stamp_.config_hash << " version=" << stamp_.version << "\n";
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (i > 0) out << ',';
        out << columns_[i];
    }
    out << "\n";
    for (const auto& row : rows_) out << row << "\n";
    return out.str();
}

void write_text_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open output file: " + path);
    out << contents;
    if (!out) throw Error("failed writing output file: " + path);
}

}  // namespace cosshell::tool
