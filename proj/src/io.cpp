#include "prodis/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "prodis/errors.hpp"

namespace prodis::io {

std::string format_real(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open file: " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write file: " + path);
  out << content;
  if (!out) throw ConfigError("write failed: " + path);
}

std::string trace_csv(const std::vector<slln::ConvergenceTrace>& traces) {
  std::string out = "n,mean_fX,mean_xif,gap,replication,seed\n";
  for (const auto& trace : traces) {
    for (const auto& cp : trace.checkpoints) {
      out += std::to_string(cp.n);
      out += ',';
      out += format_real(cp.mean_fx);
      out += ',';
      out += format_real(cp.mean_xif);
      out += ',';
      out += format_real(cp.gap);
      out += ',';
      out += std::to_string(trace.replication);
      out += ',';
      out += std::to_string(trace.seed);
      out += '\n';
    }
  }
  return out;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& content) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  for (char c : content) {
    if (c == ',') {
      row.push_back(field);
      field.clear();
    } else if (c == '\n') {
      row.push_back(field);
      field.clear();
      if (row.size() > 1 || !row[0].empty()) rows.push_back(row);  // skip blank lines
      row.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  if (!field.empty() || !row.empty()) {
    row.push_back(field);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace prodis::io
