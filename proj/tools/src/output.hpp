#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace nonlocal::cli {

std::string provenance_line(const std::string& command, const std::string& config_hash);

// Comma-separated, '.' decimal, 17 significant digits, one comment line with
// provenance and a mandatory column header.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::string& provenance,
            const std::vector<std::string>& columns);

  CsvWriter& operator<<(double value);
  CsvWriter& operator<<(const std::string& value);
  void end_row();

 private:
  void separator();
  std::ofstream out_;
  std::size_t columns_;
  std::size_t filled_ = 0;
};

std::string format_double(double value);

void write_json(const std::filesystem::path& path, const nlohmann::json& body, const std::string& command,
                const std::string& config_hash);

}  // namespace nonlocal::cli
