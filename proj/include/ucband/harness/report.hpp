#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ucband::harness {

/// Long-format CSV with columns source,series,x,y. Band files contribute one
/// series per envelope column (x is x_1 for d = 1, the grid index otherwise);
/// coverage JSON contributes coverage and nominal curves against alpha;
/// adaptivity JSON contributes mean sup-width curves against n.
struct ReportInputs {
  std::vector<std::string> band_files;
  std::vector<std::string> coverage_files;
  std::vector<std::string> adaptivity_files;
};

void write_report(const ReportInputs& inputs, std::ostream& out);

}  // namespace ucband::harness
