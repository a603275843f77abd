#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "ucband/bands.hpp"
#include "ucband/estimator.hpp"

namespace ucband::harness {

/// Reads one observation per row with exactly `dimension` numeric columns.
/// A first row that is not numeric is taken as a header. Blank lines are
/// skipped. Any other malformed row raises DataError naming the row.
Sample read_sample_csv(std::istream& in, std::size_t dimension);
Sample read_sample_csv(const std::string& path, std::size_t dimension);

void write_sample_csv(std::ostream& out, const std::vector<double>& row_major,
                      std::size_t dimension);

/// Columns: x_1..x_d, f_hat, lower_raw, upper_raw, lower_clipped, upper_clipped, sigma_hat.
void write_band_csv(std::ostream& out, const ConfidenceBand& band);
void write_band_csv(const std::string& path, const ConfidenceBand& band);

/// Parsed band file, used by the report renderer.
struct BandTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

BandTable read_band_csv(const std::string& path);

}  // namespace ucband::harness
