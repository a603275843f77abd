#include "ucband/harness/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <istream>
#include <ostream>

#include "ucband/error.hpp"

namespace ucband::harness {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

bool parse_field(std::string_view s, double& v) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::string num(double v) { return fmt::format("{:.17g}", v); }

}  // namespace

Sample read_sample_csv(std::istream& in, std::size_t dimension) {
  if (dimension < 1) throw ParameterError("dimension must be >= 1");
  std::vector<double> data;
  std::string line;
  std::size_t row = 0;
  bool seen_content = false;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto fields = split(line);
    std::vector<double> values(fields.size());
    std::size_t bad = fields.size();
    for (std::size_t j = 0; j < fields.size() && bad == fields.size(); ++j)
      if (!parse_field(fields[j], values[j])) bad = j;

    if (!seen_content) {
      seen_content = true;
      if (bad != fields.size()) {
        // Header row: must still have the right width.
        if (fields.size() != dimension)
          throw DataError("row " + std::to_string(row) + ": header has " +
                          std::to_string(fields.size()) + " columns, expected " +
                          std::to_string(dimension));
        continue;
      }
    }
    if (fields.size() != dimension)
      throw DataError("row " + std::to_string(row) + ": found " + std::to_string(fields.size()) +
                      " columns, expected " + std::to_string(dimension));
    if (bad != fields.size())
      throw DataError("row " + std::to_string(row) + ", column " + std::to_string(bad + 1) +
                      ": non-numeric value '" + std::string(fields[bad]) + "'");
    for (double v : values)
      if (!std::isfinite(v))
        throw DataError("row " + std::to_string(row) + ": non-finite value");
    data.insert(data.end(), values.begin(), values.end());
  }
  if (data.empty()) throw DataError("no observations in input");
  const std::size_t n = data.size() / dimension;
  if (n < 2) throw DataError("at least 2 observations are required, found " + std::to_string(n));
  return Sample(std::move(data), dimension);
}

Sample read_sample_csv(const std::string& path, std::size_t dimension) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open data file '" + path + "'");
  return read_sample_csv(in, dimension);
}

void write_sample_csv(std::ostream& out, const std::vector<double>& row_major,
                      std::size_t dimension) {
  for (std::size_t j = 0; j < dimension; ++j) out << (j ? ",x_" : "x_") << j + 1;
  out << '\n';
  for (std::size_t i = 0; i < row_major.size(); i += dimension) {
    for (std::size_t j = 0; j < dimension; ++j) out << (j ? "," : "") << num(row_major[i + j]);
    out << '\n';
  }
}

void write_band_csv(std::ostream& out, const ConfidenceBand& band) {
  const std::size_t d = band.grid.d();
  for (std::size_t j = 0; j < d; ++j) out << "x_" << j + 1 << ',';
  out << "f_hat,lower_raw,upper_raw,lower_clipped,upper_clipped,sigma_hat\n";
  for (std::size_t i = 0; i < band.size(); ++i) {
    const auto x = band.grid.point(i);
    for (std::size_t j = 0; j < d; ++j) out << num(x[j]) << ',';
    out << num(band.center[i]) << ',' << num(band.lower(i)) << ',' << num(band.upper(i)) << ','
        << num(band.lower_clipped(i)) << ',' << num(band.upper_clipped(i)) << ','
        << num(band.sigma[i]) << '\n';
  }
}

void write_band_csv(const std::string& path, const ConfidenceBand& band) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path + "'");
  write_band_csv(out, band);
}

BandTable read_band_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open band file '" + path + "'");
  BandTable t;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto fields = split(line);
    if (t.columns.empty()) {
      for (auto f : fields) t.columns.emplace_back(f);
      continue;
    }
    if (fields.size() != t.columns.size())
      throw DataError("row " + std::to_string(row) + ": column count differs from header");
    std::vector<double> values(fields.size());
    for (std::size_t j = 0; j < fields.size(); ++j)
      if (!parse_field(fields[j], values[j]))
        throw DataError("row " + std::to_string(row) + ": non-numeric value");
    t.rows.push_back(std::move(values));
  }
  if (t.columns.empty()) throw DataError("band file '" + path + "' is empty");
  return t;
}

}  // namespace ucband::harness
