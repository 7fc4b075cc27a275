#pragma once

#include "dks/csv.hpp"
#include "dks/scoring.hpp"
#include "dks/variable_kernels.hpp"

#include <string>
#include <vector>

namespace dks {

struct WindowConfig {
  Index width = 50;
  Index stride = 1;

  void validate() const;
};

/// Two consecutive windows: `previous` covers rows [previous_first, previous_first + width),
/// `current` starts one row later. `t` is the 1-based index of the current
/// window's last row, the position the scores are reported at.
struct WindowPair {
  Index previous_first = 0;
  Index current_first = 0;
  Index width = 0;
  Index t = 0;
};

/// Pairs at t = width + 1, width + 1 + stride, ... <= n_observations.
/// Throws InvalidInput when n_observations < width + stride.
std::vector<WindowPair> sliding_windows(Index n_observations, const WindowConfig& config);

struct PipelineConfig {
  VariableKernelKind variable_kernel = VariableKernelKind::Correlation;
  MatrixKernelKind matrix_kernel = MatrixKernelKind::GaussianMatrixKernel;
  double lambda = kDefaultDiffusionLambda;
  double ridge = kDefaultRidge;
  /// Explicit target groups by variable name; empty means one target per variable.
  std::vector<std::vector<std::string>> groups;

  void validate() const;
};

/// Resolves the configured targets against the dataset's variable names.
std::vector<LabeledTarget> resolve_targets(const Dataset& ds, const PipelineConfig& config);

/// Kernel of the earlier window against the later one, for every window pair.
/// Pairs are scored concurrently; the output is ordered by t.
std::vector<ScoreReport> score_stream(const TimeSeries& series, const WindowConfig& window,
                                      const PipelineConfig& pipeline);

/// {"config": {...}, "scores": [{"t": ..., "system": ..., "targets": {...}}]}
std::string reports_to_json(const std::vector<ScoreReport>& reports, const WindowConfig& window,
                            const PipelineConfig& pipeline, const Dataset& ds);

/// Header "t,system,<target labels>", one row per report.
std::string reports_to_csv(const std::vector<ScoreReport>& reports);

/// Shortest round-trip decimal form.
std::string format_double(double value);

}  // namespace dks
