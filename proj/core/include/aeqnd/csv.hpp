#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace aeqnd {

// Shortest round-trip decimal, '.' separator, independent of locale.
std::string format_double(double v);

void write_csv_row(std::ostream& os, const std::vector<std::string>& cells);
void write_csv_row(std::ostream& os, const std::vector<double>& cells);

}  // namespace aeqnd
