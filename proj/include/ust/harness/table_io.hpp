#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <string>
#include <vector>

namespace ust {

inline constexpr const char* kVersion = "ustsim 0.1.0";

// Every output file starts with a commented header (version, full config,
// timestamp) followed by a "# data:" marker. Everything below the marker is
// a pure function of (version, config, seed), so reruns can be compared
// byte-for-byte from that line on.
class TableWriter {
 public:
  TableWriter(const std::string& path,
              const std::vector<std::pair<std::string, std::string>>& config);
  ~TableWriter();

  void line(const std::string& text);

  static std::string format_double(double v);

  // Data section of a written file (all bytes after the "# data:" marker).
  static std::string data_section(const std::string& path);

 private:
  std::ofstream out_;
};

std::string join_csv(const std::vector<std::string>& fields);

}  // namespace ust
