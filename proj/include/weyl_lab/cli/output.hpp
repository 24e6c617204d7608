#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace weyl_lab::cli {

/// Decimal with 17 significant digits.
std::string format_number(double value);

/// CSV file: one comment line "# weyl-lab <version> config_hash=<hex>", one schema line, then rows.
class CsvWriter {
public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns, std::uint64_t config_hash);

  CsvWriter& cell(double value);
  CsvWriter& cell(std::int64_t value);
  CsvWriter& cell(int value) { return cell(static_cast<std::int64_t>(value)); }
  CsvWriter& cell(const std::string& value);
  void end_row();

private:
  void separator();

  std::ofstream out_;
  std::size_t columns_;
  std::size_t filled_ = 0;
  std::string path_;
};

/// Writes {"meta": {...}, ...body} with two-space indentation.
void write_json(const std::string& path, const std::string& experiment, std::uint64_t config_hash,
                nlohmann::json body);

const char* library_version();

} // namespace weyl_lab::cli
