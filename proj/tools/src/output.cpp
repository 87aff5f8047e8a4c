#include "output.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "config.hpp"

namespace nonlocal::cli {

std::string provenance_line(const std::string& command, const std::string& config_hash) {
  return "# nonlocal_spectra " NONLOCAL_VERSION " command=" + command + " config_hash=" + config_hash +
         " schema_version=" + std::to_string(kSchemaVersion) + " core=" NONLOCAL_VERSION;
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::string& provenance,
                     const std::vector<std::string>& columns)
    : out_(path), columns_(columns.size()) {
  if (!out_) throw std::runtime_error("cannot write " + path.string());
  out_ << provenance << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
  out_ << '\n';
}

void CsvWriter::separator() {
  if (filled_ > 0) out_ << ',';
  ++filled_;
}

CsvWriter& CsvWriter::operator<<(double value) {
  separator();
  out_ << format_double(value);
  return *this;
}

CsvWriter& CsvWriter::operator<<(const std::string& value) {
  separator();
  out_ << value;
  return *this;
}

void CsvWriter::end_row() {
  if (filled_ != columns_) throw std::logic_error("CSV row has the wrong number of fields");
  out_ << '\n';
  filled_ = 0;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& body, const std::string& command,
                const std::string& config_hash) {
  nlohmann::json doc = body;
  doc["provenance"] = {{"tool", "nonlocal_spectra"},
                       {"version", NONLOCAL_VERSION},
                       {"command", command},
                       {"config_hash", config_hash},
                       {"schema_version", kSchemaVersion}};
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

}  // namespace nonlocal::cli
