#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "ucband/bands.hpp"
#include "ucband/bootstrap.hpp"
#include "ucband/estimator.hpp"
#include "ucband/harness/config.hpp"
#include "ucband/kernels.hpp"
#include "ucband/lepski.hpp"

namespace ucband::harness {

/// Everything produced by one surface -> draws -> selection -> band run.
/// `bands` and `c_alpha` are aligned with the requested alphas; all of them
/// share one set of multiplier draws.
struct PipelineResult {
  StudentizedSurface surface;
  MultiplierDraws draws;
  SelectionResult selection;
  std::vector<QuantileEstimate> c_alpha;
  std::vector<ConfidenceBand> bands;
};

PipelineResult run_pipeline(const Sample& sample, const KernelFamily& family,
                            const EvalGrid& xgrid, const ResolutionGrid& lgrid,
                            const RunConfig& config, const std::vector<double>& alphas);

/// Single-alpha run using every setting in `config`.
PipelineResult run_pipeline(const Sample& sample, const RunConfig& config);

nlohmann::ordered_json band_metadata(const PipelineResult& result, const RunConfig& config);

struct BandRunOutput {
  std::string band_path;
  std::string metadata_path;
  PipelineResult result;
};

/// Reads io.data, runs the pipeline, writes io.output and io.metadata
/// (default: io.output with ".json" appended).
BandRunOutput run_band(const RunConfig& config);

}  // namespace ucband::harness
