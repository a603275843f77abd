#include "ucband/harness/simulation.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include "ucband/error.hpp"
#include "ucband/harness/pipeline.hpp"
#include "ucband/parallel.hpp"

namespace ucband::harness {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Band region from the config when given, otherwise from the density.
void resolve_region(RunConfig& config, const std::vector<double>& lower,
                    const std::vector<double>& upper) {
  if (config.grid.x_lower.empty()) config.grid.x_lower = lower;
  if (config.grid.x_upper.empty()) config.grid.x_upper = upper;
}

struct RepOutcome {
  bool ok = false;
  std::vector<bool> covered;
  std::vector<double> sup_width;
  double l_hat = 0.0;
  bool no_level_accepted = false;
};

}  // namespace

double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ParameterError("ols_slope needs >= 2 pairs");
  const double m = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= m;
  my /= m;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (!(sxx > 0.0)) throw ParameterError("ols_slope needs distinct x values");
  return sxy / sxx;
}

CoverageReport coverage_sim(const CoverageSpec& spec) {
  if (spec.reps < kMinCoverageReps)
    throw ParameterError("coverage_sim needs at least " + std::to_string(kMinCoverageReps) +
                         " reps");
  if (spec.alphas.empty()) throw ParameterError("coverage_sim needs at least one alpha");
  if (spec.n < 2) throw ParameterError("coverage_sim needs n >= 2");
  const TestDensity density = make_density(spec.density_id, spec.config.dimension);
  RunConfig config = spec.config;
  resolve_region(config, density.band_lower, density.band_upper);
  for (double a : spec.alphas) {
    RunConfig probe = config;
    probe.alpha = a;
    probe.validate();
  }
  config.validate();
  const KernelFamily family = config.make_family();
  const EvalGrid xgrid = config.make_xgrid();
  const ResolutionGrid lgrid = config.make_lgrid();
  lgrid.validate(family);

  std::vector<double> truth(xgrid.size());
  for (std::size_t g = 0; g < xgrid.size(); ++g) truth[g] = density.pdf(xgrid.point(g));

  std::vector<RepOutcome> outcomes(spec.reps);
  parallel_for(spec.reps, [&](std::size_t r) {
    RepOutcome& o = outcomes[r];
    try {
      Rng rng = child_rng(spec.master_seed, Stream::sample, r);
      const Sample sample(density.sample(spec.n, rng), config.dimension);
      RunConfig rep = config;
      rep.bootstrap.seed = derive_seed(spec.master_seed, Stream::multiplier, r);
      const PipelineResult p = run_pipeline(sample, family, xgrid, lgrid, rep, spec.alphas);
      for (const ConfidenceBand& band : p.bands) {
        bool inside = true;
        for (std::size_t g = 0; g < band.size() && inside; ++g)
          inside = band.lower(g) <= truth[g] && truth[g] <= band.upper(g);
        o.covered.push_back(inside);
        o.sup_width.push_back(width_report(band).sup_width);
      }
      o.l_hat = p.selection.l_hat;
      o.no_level_accepted = p.selection.no_level_accepted;
      o.ok = true;
    } catch (const Error&) {
      o.ok = false;
    }
  });

  CoverageReport report;
  report.density_id = density.id;
  report.n = spec.n;
  report.reps = spec.reps;
  report.config_echo = to_string(config);
  report.rows.resize(spec.alphas.size());
  std::size_t successes = 0;
  for (const RepOutcome& o : outcomes) {
    if (!o.ok) {
      ++report.errors;
      continue;
    }
    ++successes;
    ++report.l_hat_histogram[o.l_hat];
    if (o.no_level_accepted) ++report.no_level_accepted;
    for (std::size_t a = 0; a < spec.alphas.size(); ++a) {
      if (o.covered[a]) ++report.rows[a].covered;
      report.rows[a].mean_sup_width += o.sup_width[a];
    }
  }
  for (std::size_t a = 0; a < spec.alphas.size(); ++a) {
    CoverageRow& row = report.rows[a];
    row.alpha = spec.alphas[a];
    row.empirical_coverage = static_cast<double>(row.covered) / static_cast<double>(spec.reps);
    row.binomial_se = std::sqrt(row.empirical_coverage * (1.0 - row.empirical_coverage) /
                                static_cast<double>(spec.reps));
    row.mean_sup_width = successes ? row.mean_sup_width / static_cast<double>(successes) : kNaN;
  }
  return report;
}

AdaptivityReport adaptivity_sim(const AdaptivitySpec& spec) {
  if (spec.ladder.size() < 3) throw ParameterError("adaptivity_sim needs >= 3 ladder points");
  for (std::size_t k = 0; k < spec.ladder.size(); ++k)
    if (spec.ladder[k] < 2 || (k && spec.ladder[k] <= spec.ladder[k - 1]))
      throw ParameterError("adaptivity ladder must be strictly increasing with n >= 2");
  if (spec.density_ids.empty()) throw ParameterError("adaptivity_sim needs a density");
  if (spec.reps < 1) throw ParameterError("adaptivity_sim needs reps >= 1");

  std::vector<TestDensity> densities;
  for (const auto& id : spec.density_ids)
    densities.push_back(make_density(id, spec.config.dimension));
  RunConfig config = spec.config;
  config.grid.x_lower = spec.x_lower;
  config.grid.x_upper = spec.x_upper;
  resolve_region(config, densities.front().band_lower, densities.front().band_upper);
  config.validate();
  const KernelFamily family = config.make_family();
  const EvalGrid xgrid = config.make_xgrid();
  const ResolutionGrid lgrid = config.make_lgrid();
  lgrid.validate(family);

  const std::size_t ladder = spec.ladder.size();
  const std::size_t d = config.dimension;
  AdaptivityReport report;
  report.ladder = spec.ladder;
  report.reps = spec.reps;
  report.config_echo = to_string(config);

  for (const TestDensity& density : densities) {
    AdaptivityCurve curve;
    curve.density_id = density.id;
    curve.holder_t = density.holder_t;
    curve.theoretical_slope =
        std::isinf(density.holder_t) ? 0.5 : density.holder_t / (2.0 * density.holder_t + d);
    curve.widths.assign(ladder, std::vector<double>(spec.reps, kNaN));
    std::vector<std::vector<double>> l_hats(ladder, std::vector<double>(spec.reps, kNaN));
    curve.errors.assign(ladder, 0);

    parallel_for(ladder * spec.reps, [&](std::size_t job) {
      const std::size_t k = job / spec.reps;
      const std::size_t r = job % spec.reps;
      const std::uint64_t seed = derive_seed(spec.master_seed, Stream::battery, k);
      try {
        Rng rng = child_rng(seed, Stream::sample, r);
        const Sample sample(density.sample(spec.ladder[k], rng), d);
        RunConfig rep = config;
        rep.bootstrap.seed = derive_seed(seed, Stream::multiplier, r);
        const PipelineResult p = run_pipeline(sample, family, xgrid, lgrid, rep, {config.alpha});
        curve.widths[k][r] = width_report(p.bands.front()).sup_width;
        l_hats[k][r] = p.selection.l_hat;
      } catch (const Error&) {
        // left as NaN and counted below
      }
    });

    std::vector<double> log_rate, log_width;
    for (std::size_t k = 0; k < ladder; ++k) {
      double sum = 0.0, l_sum = 0.0;
      std::size_t ok = 0;
      for (std::size_t r = 0; r < spec.reps; ++r) {
        if (std::isnan(curve.widths[k][r])) continue;
        sum += curve.widths[k][r];
        l_sum += l_hats[k][r];
        ++ok;
      }
      curve.errors[k] = spec.reps - ok;
      curve.mean_sup_width.push_back(ok ? sum / static_cast<double>(ok) : kNaN);
      curve.mean_l_hat.push_back(ok ? l_sum / static_cast<double>(ok) : kNaN);
      const double n = static_cast<double>(spec.ladder[k]);
      log_rate.push_back(std::log(std::log(n) / n));
      log_width.push_back(std::log(curve.mean_sup_width.back()));
    }
    curve.fitted_slope = ols_slope(log_rate, log_width);
    for (std::size_t k = 0; k + 1 < ladder; ++k) {
      std::size_t dec = 0;
      for (std::size_t r = 0; r < spec.reps; ++r)
        if (curve.widths[k + 1][r] < curve.widths[k][r]) ++dec;
      curve.paired_decrease_fraction.push_back(static_cast<double>(dec) /
                                               static_cast<double>(spec.reps));
    }
    report.curves.push_back(std::move(curve));
  }
  return report;
}

nlohmann::ordered_json to_json(const CoverageReport& r) {
  nlohmann::ordered_json j;
  j["kind"] = "coverage";
  j["density"] = r.density_id;
  j["n"] = r.n;
  j["reps"] = r.reps;
  j["errors"] = r.errors;
  j["no_level_accepted"] = r.no_level_accepted;
  auto rows = nlohmann::ordered_json::array();
  for (const CoverageRow& row : r.rows) {
    nlohmann::ordered_json e;
    e["alpha"] = row.alpha;
    e["covered"] = row.covered;
    e["empirical_coverage"] = row.empirical_coverage;
    e["binomial_se"] = row.binomial_se;
    e["mean_sup_width"] = row.mean_sup_width;
    rows.push_back(e);
  }
  j["rows"] = rows;
  auto hist = nlohmann::ordered_json::array();
  for (const auto& [level, count] : r.l_hat_histogram) hist.push_back({level, count});
  j["l_hat_histogram"] = hist;
  j["config"] = r.config_echo;
  return j;
}

nlohmann::ordered_json to_json(const AdaptivityReport& r) {
  nlohmann::ordered_json j;
  j["kind"] = "adaptivity";
  j["ladder"] = r.ladder;
  j["reps"] = r.reps;
  auto curves = nlohmann::ordered_json::array();
  for (const AdaptivityCurve& c : r.curves) {
    nlohmann::ordered_json e;
    e["density"] = c.density_id;
    e["holder_t"] = std::isinf(c.holder_t) ? nlohmann::ordered_json("inf")
                                           : nlohmann::ordered_json(c.holder_t);
    e["theoretical_slope"] = c.theoretical_slope;
    e["fitted_slope"] = c.fitted_slope;
    e["mean_sup_width"] = c.mean_sup_width;
    e["mean_l_hat"] = c.mean_l_hat;
    e["errors"] = c.errors;
    e["paired_decrease_fraction"] = c.paired_decrease_fraction;
    curves.push_back(e);
  }
  j["curves"] = curves;
  j["config"] = r.config_echo;
  return j;
}

}  // namespace ucband::harness
