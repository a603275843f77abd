// ucband command-line front end.

#include <CLI11.hpp>
#include <cstdio>
#include <fmt/format.h>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "ucband/error.hpp"
#include "ucband/gp_lab.hpp"
#include "ucband/harness/config.hpp"
#include "ucband/harness/csv_io.hpp"
#include "ucband/harness/pipeline.hpp"
#include "ucband/harness/report.hpp"
#include "ucband/harness/simulation.hpp"

using namespace ucband;
using namespace ucband::harness;
using json = nlohmann::ordered_json;

namespace {

int report_error(const char* kind, int code, const std::string& message) {
  json e;
  e["error"] = kind;
  e["exit_code"] = code;
  e["message"] = message;
  std::cerr << e.dump() << std::endl;
  return code;
}

// Settings shared by every config-driven subcommand. Precedence, lowest
// first: built-in defaults (seed from UCBAND_SEED), --config file, --set
// pairs, dedicated flags.
struct ConfigFlags {
  std::string file;
  std::vector<std::string> sets;
  std::optional<std::string> kernel, variant, degeneracy, data, output, metadata;
  std::optional<std::size_t> dimension, replications;
  std::optional<double> alpha;
  std::optional<std::uint64_t> seed;

  void attach(CLI::App* app, bool with_io) {
    app->add_option("-c,--config", file, "INI config file");
    app->add_option("--set", sets, "Override a config key, e.g. --set lepski.q=1.2");
    app->add_option("-k,--kernel", kernel,
                    "epanechnikov | poly4 | haar | daub4 | fourier | legendre");
    app->add_option("-d,--dimension", dimension, "Data dimension");
    app->add_option("--alpha", alpha, "Band level alpha");
    app->add_option("--variant", variant, "bias-controlled | undersmoothed");
    app->add_option("--degeneracy", degeneracy, "error | drop-level");
    app->add_option("-B,--replications", replications, "Bootstrap replications");
    app->add_option("--seed", seed, "Master seed (overrides UCBAND_SEED)");
    if (with_io) {
      app->add_option("--data", data, "Input sample CSV");
      app->add_option("-o,--output", output, "Band CSV output path");
      app->add_option("--metadata", metadata, "Metadata JSON path (default: output + .json)");
    }
  }

  RunConfig build() const {
    RunConfig c = default_config();
    if (!file.empty()) c = load_config(file, c);
    for (const auto& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ParameterError("--set expects key=value, got '" + kv + "'");
      c.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (kernel) c.set("kernel", *kernel);
    if (dimension) c.dimension = *dimension;
    if (alpha) c.alpha = *alpha;
    if (variant) c.set("variant", *variant);
    if (degeneracy) c.set("degeneracy", *degeneracy);
    if (replications) c.bootstrap.replications = *replications;
    if (seed) c.bootstrap.seed = *seed;
    if (data) c.data_path = *data;
    if (output) c.output_path = *output;
    if (metadata) c.metadata_path = *metadata;
    return c;
  }
};

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

int cmd_band(const ConfigFlags& flags) {
  const RunConfig config = flags.build();
  const BandRunOutput out = run_band(config);
  const auto& sel = out.result.selection;
  const WidthReport w = width_report(out.result.bands.front());
  std::cout << fmt::format("l_hat = {}  c_hat_alpha = {:.6g}  c_n_prime = {:.6g}  sup_width = {:.6g}{}\n",
                           sel.l_hat, out.result.c_alpha.front().value, sel.c_n_prime, w.sup_width,
                           sel.no_level_accepted ? "  (no level accepted)" : "");
  std::cout << "band: " << out.band_path << "\nmetadata: " << out.metadata_path << '\n';
  return 0;
}

int cmd_lepski(const ConfigFlags& flags, const std::string& json_path) {
  RunConfig config = flags.build();
  config.validate();
  if (config.data_path.empty()) throw ParameterError("io.data is required");
  const Sample sample = read_sample_csv(config.data_path, config.dimension);
  const PipelineResult r = run_pipeline(sample, config);
  const SelectionResult& s = r.selection;

  std::cout << fmt::format("n = {}  gamma = {:.6g}  c_hat(gamma) = {:.6g}  threshold = {:.6g}\n",
                           sample.n(), s.gamma, s.c_hat_gamma, s.threshold);
  std::cout << fmt::format("{:>10}  {:>14}  {}\n", "level", "statistic", "accepted");
  for (std::size_t k = 0; k < s.levels.size(); ++k)
    std::cout << fmt::format("{:>10.6g}  {:>14.6g}  {}{}\n", s.levels[k], s.test_statistics[k],
                             s.test_statistics[k] <= s.threshold ? "yes" : "no",
                             k == s.l_hat_index ? "  <- l_hat" : "");
  if (!r.surface.dropped_levels.empty()) {
    std::cout << "dropped levels:";
    for (double l : r.surface.dropped_levels) std::cout << ' ' << l;
    std::cout << '\n';
  }
  std::cout << fmt::format("l_hat = {}  c_n_prime = {:.6g}{}\n", s.l_hat, s.c_n_prime,
                           s.no_level_accepted ? "  (no level accepted)" : "");
  if (!json_path.empty()) {
    json j;
    j["n"] = sample.n();
    j["levels"] = s.levels;
    j["test_statistics"] = s.test_statistics;
    j["dropped_levels"] = r.surface.dropped_levels;
    j["gamma"] = s.gamma;
    j["c_hat_gamma"] = s.c_hat_gamma;
    j["threshold"] = s.threshold;
    j["l_hat"] = s.l_hat;
    j["c_n_prime"] = s.c_n_prime;
    j["no_level_accepted"] = s.no_level_accepted;
    write_json_file(json_path, j);
  }
  return 0;
}

int cmd_coverage(const ConfigFlags& flags, CoverageSpec spec, const std::string& json_path) {
  spec.config = flags.build();
  spec.master_seed = spec.config.bootstrap.seed;
  const CoverageReport r = coverage_sim(spec);
  std::cout << fmt::format("density = {}  n = {}  reps = {}  errors = {}\n", r.density_id, r.n,
                           r.reps, r.errors);
  std::cout << fmt::format("{:>8}  {:>8}  {:>10}  {:>8}  {:>14}\n", "alpha", "covered",
                           "coverage", "se", "mean_sup_width");
  for (const CoverageRow& row : r.rows)
    std::cout << fmt::format("{:>8.4g}  {:>8}  {:>10.4f}  {:>8.4f}  {:>14.6g}\n", row.alpha,
                             row.covered, row.empirical_coverage, row.binomial_se,
                             row.mean_sup_width);
  std::cout << "l_hat histogram:";
  for (const auto& [level, count] : r.l_hat_histogram)
    std::cout << ' ' << level << ':' << count;
  std::cout << '\n';
  if (!json_path.empty()) write_json_file(json_path, to_json(r));
  return 0;
}

int cmd_adaptivity(const ConfigFlags& flags, AdaptivitySpec spec, const std::string& json_path) {
  spec.config = flags.build();
  spec.master_seed = spec.config.bootstrap.seed;
  spec.x_lower = spec.config.grid.x_lower;
  spec.x_upper = spec.config.grid.x_upper;
  const AdaptivityReport r = adaptivity_sim(spec);
  for (const AdaptivityCurve& c : r.curves) {
    std::cout << fmt::format("density = {}  t = {}  fitted slope = {:.4f}  theoretical = {:.4f}\n",
                             c.density_id, c.holder_t, c.fitted_slope, c.theoretical_slope);
    for (std::size_t k = 0; k < r.ladder.size(); ++k)
      std::cout << fmt::format("  n = {:>7}  mean sup-width = {:.6g}  mean l_hat = {:.3f}  errors = {}\n",
                               r.ladder[k], c.mean_sup_width[k], c.mean_l_hat[k], c.errors[k]);
  }
  if (!json_path.empty()) write_json_file(json_path, to_json(r));
  return 0;
}

struct AntiFlags {
  std::string generator = "equicorrelated";
  std::size_t p = 100;
  double rho = 0.5;
  std::size_t rank = 0;
  std::size_t battery = 50;
  std::size_t p_min = 5, p_max = 200;
  std::vector<double> epsilons{0.01, 0.05, 0.1, 0.2};
  std::size_t draws = 100000;
  std::optional<std::uint64_t> seed;
  std::string mode = "abs";
  std::string json_path;
};

int cmd_anticoncentration(const AntiFlags& f) {
  const std::uint64_t seed = f.seed ? *f.seed : default_config().bootstrap.seed;
  SupMode mode;
  if (f.mode == "abs") mode = SupMode::abs_sup;
  else if (f.mode == "signed") mode = SupMode::signed_sup;
  else throw ParameterError("--mode must be 'abs' or 'signed'");

  std::vector<CovarianceModel> models;
  if (f.generator == "equicorrelated") {
    models.push_back(CovarianceModel::equicorrelated(f.p, f.rho));
  } else if (f.generator == "brownian-grid") {
    models.push_back(CovarianceModel::brownian_grid(f.p));
  } else if (f.generator == "random-gram") {
    Rng rng = child_rng(seed, Stream::battery, 0);
    models.push_back(CovarianceModel::random_gram(f.p, f.rank ? f.rank : f.p, rng));
  } else if (f.generator == "battery") {
    models = random_covariance_battery(f.battery, f.p_min, f.p_max, seed);
  } else {
    throw ParameterError("unknown generator '" + f.generator + "'");
  }

  json out;
  out["mode"] = f.mode;
  out["draws"] = f.draws;
  out["seed"] = seed;
  auto list = json::array();
  bool all_pass = true;
  std::size_t failures = 0;
  std::cout << fmt::format("{:<32} {:>5} {:>8} {:>8} {:>10} {:>10} {:>10} {:>10}  {}\n", "model",
                           "p", "a_hat", "eps", "p_hat", "bound", "slack", "margin", "result");
  for (std::size_t i = 0; i < models.size(); ++i) {
    const AnticoncentrationReport r = check_anticoncentration(
        models[i], f.epsilons, f.draws, derive_seed(seed, Stream::gaussian, i), mode);
    json m;
    m["label"] = r.label;
    m["p"] = r.dimension;
    m["a_hat"] = r.a_hat;
    auto rows = json::array();
    for (const AnticoncentrationRow& row : r.rows) {
      std::cout << fmt::format("{:<32} {:>5} {:>8.4f} {:>8.4g} {:>10.5f} {:>10.5f} {:>10.5f} "
                               "{:>10.5f}  {}\n",
                               r.label, r.dimension, r.a_hat, row.epsilon, row.p_hat, row.bound,
                               row.slack, row.margin, row.pass ? "PASS" : "FAIL");
      json e;
      e["epsilon"] = row.epsilon;
      e["p_hat"] = row.p_hat;
      e["mcse"] = row.mcse;
      e["bound"] = row.bound;
      e["slack"] = row.slack;
      e["margin"] = row.margin;
      e["pass"] = row.pass;
      rows.push_back(e);
      if (!row.pass) ++failures;
    }
    m["rows"] = rows;
    m["all_pass"] = r.all_pass;
    all_pass = all_pass && r.all_pass;
    list.push_back(m);
  }
  out["models"] = list;
  out["all_pass"] = all_pass;
  std::cout << fmt::format("{} model(s), {} failure(s): {}\n", models.size(), failures,
                           all_pass ? "PASS" : "FAIL");
  if (!f.json_path.empty()) write_json_file(f.json_path, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Honest adaptive uniform confidence bands for densities"};
  app.require_subcommand(1);

  ConfigFlags band_flags, lepski_flags, cov_flags, ada_flags;
  std::string lepski_json, cov_json, ada_json;

  auto* band = app.add_subcommand("band", "Build a confidence band from a sample CSV");
  band_flags.attach(band, true);

  auto* lepski = app.add_subcommand("lepski", "Print the Lepski test statistics table");
  lepski_flags.attach(lepski, true);
  lepski->add_option("--json", lepski_json, "Also write the table as JSON");

  CoverageSpec cov_spec;
  auto* cov = app.add_subcommand("coverage-sim", "Monte Carlo coverage of the band");
  cov_flags.attach(cov, false);
  cov->add_option("--density", cov_spec.density_id, "Test density id")->required();
  cov->add_option("-n", cov_spec.n, "Sample size");
  cov->add_option("--alphas", cov_spec.alphas, "Levels sharing one draw set")->delimiter(',');
  cov->add_option("--reps", cov_spec.reps, "Monte Carlo repetitions (>= 100)");
  cov->add_option("--json", cov_json, "Write the report as JSON");

  AdaptivitySpec ada_spec;
  auto* ada = app.add_subcommand("adaptivity-sim", "Width-rate regression over an n ladder");
  ada_flags.attach(ada, false);
  ada->add_option("--density", ada_spec.density_ids, "Test density ids")
      ->required()
      ->delimiter(',');
  ada->add_option("--ladder", ada_spec.ladder, "Sample sizes (>= 3)")->delimiter(',');
  ada->add_option("--reps", ada_spec.reps, "Repetitions per ladder point");
  ada->add_option("--json", ada_json, "Write the report as JSON");

  AntiFlags anti;
  auto* ac = app.add_subcommand("anticoncentration-check",
                                "Check the anti-concentration bound on Gaussian suprema");
  ac->add_option("--generator", anti.generator,
                 "equicorrelated | brownian-grid | random-gram | battery");
  ac->add_option("-p", anti.p, "Dimension");
  ac->add_option("--rho", anti.rho, "Equicorrelation");
  ac->add_option("--rank", anti.rank, "Rank for random-gram (default p)");
  ac->add_option("--battery-size", anti.battery, "Number of models for battery");
  ac->add_option("--p-min", anti.p_min, "Smallest p for battery");
  ac->add_option("--p-max", anti.p_max, "Largest p for battery");
  ac->add_option("--eps", anti.epsilons, "Epsilon list")->delimiter(',');
  ac->add_option("-M,--draws", anti.draws, "Gaussian draws (>= 1000)");
  ac->add_option("--seed", anti.seed, "Master seed (overrides UCBAND_SEED)");
  ac->add_option("--mode", anti.mode, "abs | signed");
  ac->add_option("--json", anti.json_path, "Write the table as JSON");

  ReportInputs report_in;
  std::string report_out;
  auto* rep = app.add_subcommand("report", "Render a long-format CSV for plotting");
  rep->add_option("--band", report_in.band_files, "Band CSV files");
  rep->add_option("--coverage", report_in.coverage_files, "coverage-sim JSON files");
  rep->add_option("--adaptivity", report_in.adaptivity_files, "adaptivity-sim JSON files");
  rep->add_option("-o,--output", report_out, "Output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("config", static_cast<int>(ErrorKind::config), e.what());
  }

  try {
    if (*band) return cmd_band(band_flags);
    if (*lepski) return cmd_lepski(lepski_flags, lepski_json);
    if (*cov) return cmd_coverage(cov_flags, cov_spec, cov_json);
    if (*ada) return cmd_adaptivity(ada_flags, ada_spec, ada_json);
    if (*ac) return cmd_anticoncentration(anti);
    if (*rep) {
      if (report_out.empty()) {
        write_report(report_in, std::cout);
      } else {
        std::ofstream out(report_out, std::ios::binary);
        if (!out) throw DataError("cannot write '" + report_out + "'");
        write_report(report_in, out);
      }
      return 0;
    }
  } catch (const Error& e) {
    return report_error(e.kind_name(), e.exit_code(), e.what());
  } catch (const std::exception& e) {
    return report_error("internal", 1, e.what());
  }
  return 0;
}
