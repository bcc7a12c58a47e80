#pragma once

#include <string>
#include <vector>

#include "prodis/slln.hpp"

namespace prodis::io {

// Shortest text that round-trips the double exactly (17 significant digits).
std::string format_real(double value);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

// Rows are replication-major, then checkpoint order.  Columns:
// n,mean_fX,mean_xif,gap,replication,seed
std::string trace_csv(const std::vector<slln::ConvergenceTrace>& traces);

// Minimal CSV splitter for the file formats this tool itself writes: no
// quoting, '.' decimal separator, one header row.
std::vector<std::vector<std::string>> parse_csv(const std::string& content);

}  // namespace prodis::io
