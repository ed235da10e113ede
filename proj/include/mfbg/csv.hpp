#pragma once

#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>

namespace mfbg {

// Shortest representation that round-trips a double.
std::string format_double(double value);

class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);

  void row(std::initializer_list<std::string_view> cells);

 private:
  std::ofstream out_;
};

void ensure_directory(const std::string& path);

}  // namespace mfbg
