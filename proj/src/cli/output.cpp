#include "weyl_lab/cli/output.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "weyl_lab/cli/config.hpp"

namespace weyl_lab::cli {

const char* library_version() { return WEYL_LAB_VERSION; }

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns, std::uint64_t config_hash)
    : out_(path, std::ios::binary), columns_(columns.size()), path_(path) {
  if (!out_) throw std::runtime_error("cannot write '" + path + "'");
  out_ << "# weyl-lab " << library_version() << " config_hash=" << hex64(config_hash) << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
  out_ << '\n';
}

void CsvWriter::separator() {
  if (filled_ >= columns_) throw std::logic_error("too many cells in a row of '" + path_ + "'");
  if (filled_ > 0) out_ << ',';
  ++filled_;
}

CsvWriter& CsvWriter::cell(double value) {
  separator();
  out_ << format_number(value);
  return *this;
}

CsvWriter& CsvWriter::cell(std::int64_t value) {
  separator();
  out_ << value;
  return *this;
}

CsvWriter& CsvWriter::cell(const std::string& value) {
  separator();
  out_ << value;
  return *this;
}

void CsvWriter::end_row() {
  if (filled_ != columns_) throw std::logic_error("short row in '" + path_ + "'");
  out_ << '\n';
  filled_ = 0;
}

void write_json(const std::string& path, const std::string& experiment, std::uint64_t config_hash,
                nlohmann::json body) {
  nlohmann::json doc;
  doc["meta"] = {{"tool", "weyl-lab"}, {"version", library_version()}, {"config_hash", hex64(config_hash)},
                 {"experiment", experiment}};
  for (auto it = body.begin(); it != body.end(); ++it) doc[it.key()] = it.value();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << doc.dump(2) << '\n';
}

} // namespace weyl_lab::cli
