#include "ucband/harness/report.hpp"

#include <filesystem>
#include <fmt/format.h>
#include <fstream>
#include <json.hpp>
#include <ostream>

#include "ucband/error.hpp"
#include "ucband/harness/csv_io.hpp"

namespace ucband::harness {

namespace {

void row(std::ostream& out, const std::string& source, const std::string& series, double x,
         double y) {
  out << source << ',' << series << ',' << fmt::format("{:.17g}", x) << ','
      << fmt::format("{:.17g}", y) << '\n';
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DataError("'" + path + "' is not valid JSON: " + e.what());
  }
}

std::string stem(const std::string& path) { return std::filesystem::path(path).stem().string(); }

void band_rows(const std::string& path, std::ostream& out) {
  const BandTable t = read_band_csv(path);
  std::size_t d = 0;
  while (d < t.columns.size() && t.columns[d].starts_with("x_")) ++d;
  if (d == 0 || d == t.columns.size()) throw DataError("'" + path + "' is not a band file");
  const std::string source = stem(path);
  for (std::size_t c = d; c < t.columns.size(); ++c)
    for (std::size_t i = 0; i < t.rows.size(); ++i)
      row(out, source, t.columns[c], d == 1 ? t.rows[i][0] : static_cast<double>(i),
          t.rows[i][c]);
}

void coverage_rows(const std::string& path, std::ostream& out) {
  const auto j = read_json(path);
  if (j.value("kind", "") != "coverage") throw DataError("'" + path + "' is not a coverage report");
  const std::string source = stem(path) + ":" + j.at("density").get<std::string>();
  for (const auto& r : j.at("rows")) {
    const double a = r.at("alpha").get<double>();
    row(out, source, "coverage", a, r.at("empirical_coverage").get<double>());
    row(out, source, "nominal", a, 1.0 - a);
    row(out, source, "mean_sup_width", a, r.at("mean_sup_width").get<double>());
  }
}

void adaptivity_rows(const std::string& path, std::ostream& out) {
  const auto j = read_json(path);
  if (j.value("kind", "") != "adaptivity")
    throw DataError("'" + path + "' is not an adaptivity report");
  const auto ladder = j.at("ladder").get<std::vector<double>>();
  for (const auto& c : j.at("curves")) {
    const std::string source = stem(path) + ":" + c.at("density").get<std::string>();
    const auto w = c.at("mean_sup_width").get<std::vector<double>>();
    for (std::size_t k = 0; k < ladder.size() && k < w.size(); ++k)
      row(out, source, "mean_sup_width", ladder[k], w[k]);
  }
}

}  // namespace

void write_report(const ReportInputs& inputs, std::ostream& out) {
  if (inputs.band_files.empty() && inputs.coverage_files.empty() &&
      inputs.adaptivity_files.empty())
    throw ParameterError("report needs at least one input file");
  out << "source,series,x,y\n";
  for (const auto& p : inputs.band_files) band_rows(p, out);
  for (const auto& p : inputs.coverage_files) coverage_rows(p, out);
  for (const auto& p : inputs.adaptivity_files) adaptivity_rows(p, out);
}

}  // namespace ucband::harness
