#include "chlag/io.hpp"

#include "chlag/errors.hpp"

namespace chlag::io {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string frame_filename(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "frame_%05zu.csv", index);
  return buf;
}

namespace {
std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write '" + path + "'");
  return f;
}
}  // namespace

void write_frame_csv(const std::string& path, const EulerianFrame<double>& fr) {
  auto f = open_out(path);
  f << "x,u,ux,ux_valid,rho,rho_valid\n";
  for (Eigen::Index k = 0; k < fr.x.size(); ++k)
    f << fmt(fr.x[k]) << ',' << fmt(fr.u[k]) << ',' << fmt(fr.ux[k]) << ',' << (fr.ux_valid[k] ? 1 : 0) << ','
      << fmt(fr.rho[k]) << ',' << (fr.rho_valid[k] ? 1 : 0) << '\n';
}

DiagnosticsWriter::DiagnosticsWriter(const std::string& path) : out_(open_out(path)) {
  out_ << DiagnosticsReport<double>::csv_header << '\n';
  out_.flush();
}

void DiagnosticsWriter::write(const DiagnosticsReport<double>& r) {
  const auto v = r.values();
  for (std::size_t i = 0; i < v.size(); ++i) out_ << (i ? "," : "") << fmt(v[i]);
  out_ << '\n';
  out_.flush();
}

void write_json(const std::string& path, const nlohmann::ordered_json& j) {
  auto f = open_out(path);
  f << j.dump(2) << '\n';
}

void write_table_csv(const std::string& path, const std::string& header, const std::vector<std::vector<double>>& rows) {
  auto f = open_out(path);
  f << header << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) f << (i ? "," : "") << fmt(row[i]);
    f << '\n';
  }
}

}  // namespace chlag::io
