#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "chlag/diagnostics.hpp"
#include "chlag/reconstruction.hpp"

namespace chlag::io {

/// 17 significant digits, enough to round-trip a double.
std::string fmt(double v);

std::string frame_filename(std::size_t index);

void write_frame_csv(const std::string& path, const EulerianFrame<double>& fr);

/// Appends rows to diagnostics.csv; the header goes out on construction.
class DiagnosticsWriter {
 public:
  explicit DiagnosticsWriter(const std::string& path);
  void write(const DiagnosticsReport<double>& r);

 private:
  std::ofstream out_;
};

void write_json(const std::string& path, const nlohmann::ordered_json& j);

/// Writes rows of numbers under a header line.
void write_table_csv(const std::string& path, const std::string& header, const std::vector<std::vector<double>>& rows);

}  // namespace chlag::io
