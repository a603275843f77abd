#include "ucband/harness/pipeline.hpp"

#include <fstream>

#include "ucband/error.hpp"
#include "ucband/harness/csv_io.hpp"

namespace ucband::harness {

PipelineResult run_pipeline(const Sample& sample, const KernelFamily& family,
                            const EvalGrid& xgrid, const ResolutionGrid& lgrid,
                            const RunConfig& config, const std::vector<double>& alphas) {
  if (sample.d() != static_cast<std::size_t>(family.dimension()))
    throw DataError("sample dimension " + std::to_string(sample.d()) +
                    " does not match kernel dimension " + std::to_string(family.dimension()));
  PipelineResult r;
  r.surface = build_surface(sample, family, xgrid, lgrid, config.degeneracy);
  r.draws = multiplier_draws(sample, family, r.surface, config.bootstrap.replications,
                             config.bootstrap.seed, config.bootstrap.memory_budget_mb);
  r.selection = select_resolution(r.surface, r.draws, config.lepski);
  for (double a : alphas) {
    const QuantileEstimate c = quantile_from_draws(r.draws, a);
    r.c_alpha.push_back(c);
    r.bands.push_back(config.variant == BandVariant::bias_controlled
                          ? bias_controlled_band(r.surface, r.selection.l_hat, c.value,
                                                 r.selection.c_n_prime, a)
                          : undersmoothed_band(r.surface, r.selection.l_hat, c.value, a));
  }
  return r;
}

PipelineResult run_pipeline(const Sample& sample, const RunConfig& config) {
  config.validate();
  const KernelFamily family = config.make_family();
  const ResolutionGrid lgrid = config.make_lgrid();
  lgrid.validate(family);
  return run_pipeline(sample, family, config.make_xgrid(), lgrid, config, {config.alpha});
}

nlohmann::ordered_json band_metadata(const PipelineResult& r, const RunConfig& config) {
  const ConfidenceBand& band = r.bands.front();
  const QuantileEstimate& c = r.c_alpha.front();
  const WidthReport w = width_report(band);
  nlohmann::ordered_json j;
  j["n"] = r.surface.n;
  j["d"] = config.dimension;
  j["kernel"] = r.surface.kernel_id;
  j["variant"] = to_string(band.variant);
  j["l_hat"] = r.selection.l_hat;
  j["alpha"] = band.alpha;
  j["c_hat_alpha"] = c.value;
  j["c_hat_alpha_order_index"] = c.order_index;
  j["c_n_prime"] = band.c_n_prime;
  j["q"] = config.lepski.q;
  j["gamma"] = r.selection.gamma;
  j["gamma_setting"] = config.lepski.gamma ? "fixed" : "auto";
  j["c_hat_gamma"] = r.selection.c_hat_gamma;
  j["threshold"] = r.selection.threshold;
  j["u_prime"] = config.lepski.u_prime;
  j["B"] = r.draws.replications();
  j["seed"] = r.draws.master_seed;
  j["bootstrap_streamed"] = r.draws.streamed;
  j["no_level_accepted"] = r.selection.no_level_accepted;
  j["x_grid_size"] = r.surface.grid_size();
  j["x_lower"] = r.surface.grid.lower();
  j["x_upper"] = r.surface.grid.upper();
  j["l_grid_size"] = r.surface.level_count();
  j["l_spacing"] = config.level_spacing();
  j["levels"] = r.surface.levels;
  j["dropped_levels"] = r.surface.dropped_levels;
  j["lepski_statistics"] = r.selection.test_statistics;
  j["sup_width"] = w.sup_width;
  j["mean_width"] = w.mean_width;
  j["supremum_approximation"] = "maximum over the x-grid and the l-grid";
  j["config"] = to_string(config);
  return j;
}

BandRunOutput run_band(const RunConfig& config) {
  config.validate();
  if (config.data_path.empty()) throw ParameterError("io.data is required");
  if (config.output_path.empty()) throw ParameterError("io.output is required");
  const Sample sample = read_sample_csv(config.data_path, config.dimension);

  BandRunOutput out;
  out.result = run_pipeline(sample, config);
  out.band_path = config.output_path;
  out.metadata_path =
      config.metadata_path.empty() ? config.output_path + ".json" : config.metadata_path;

  write_band_csv(out.band_path, out.result.bands.front());
  std::ofstream meta(out.metadata_path, std::ios::binary);
  if (!meta) throw DataError("cannot write '" + out.metadata_path + "'");
  meta << band_metadata(out.result, config).dump(2) << '\n';
  return out;
}

}  // namespace ucband::harness
