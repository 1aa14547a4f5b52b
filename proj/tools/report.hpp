#pragma once

#include <cosshell/version.hpp>

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace cosshell::tool {

// Every artifact the CLI writes carries the config hash and tool version so a
// result file can be traced back to the exact inputs that produced it.
struct RunStamp {
    std::string config_hash;
    std::string version = cosshell::kVersion;
};

nlohmann::ordered_json stamped_json(const RunStamp& stamp);

// CSV with a comment header carrying the stamp and a fixed column order.
// Numbers are printed with the shortest representation that round trips.
class CsvWriter {
  public:
    CsvWriter(const RunStamp& stamp, std::vector<std::string> columns);

    void add_row(const std::vector<double>& values);
    void add_row_mixed(const std::vector<std::string>& cells);

    [[nodiscard]] std::string str() const;

  private:
    RunStamp stamp_;
    std::vector<std::string> columns_;
    std::vector<std::string> rows_;
};

void write_text_file(const std::string& path, const std::string& contents);

}  // namespace cosshell::tool
