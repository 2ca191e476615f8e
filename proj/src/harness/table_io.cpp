#include "ust/harness/table_io.hpp"

#include <chrono>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace ust {

TableWriter::TableWriter(const std::string& path,
                         const std::vector<std::pair<std::string, std::string>>& config)
    : out_(path) {
  if (!out_) throw std::runtime_error("cannot open output file: " + path);
  out_ << "# " << kVersion << "\n";
  for (const auto& [key, value] : config) {
    out_ << "# config " << key << " = " << value << "\n";
  }
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[64];
  std::tm tm_utc{};
  gmtime_r(&t, &tm_utc);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  out_ << "# timestamp " << buf << "\n";
  out_ << "# data:\n";
}

TableWriter::~TableWriter() = default;

void TableWriter::line(const std::string& text) { out_ << text << "\n"; }

std::string TableWriter::format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string TableWriter::data_section(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::string line, data;
  bool in_data = false;
  while (std::getline(in, line)) {
    if (in_data) {
      data += line;
      data += '\n';
    } else if (line == "# data:") {
      in_data = true;
    }
  }
  return data;
}

std::string join_csv(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += fields[i];
  }
  return out;
}

}  // namespace ust
