#include "dks/pipeline.hpp"

#include "dks/evaluation.hpp"
#include "dks/parallel.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace dks {
namespace {

template <typename Error>
[[noreturn]] void rethrow_annotated(const Error& e, Index t) {
  throw Error("window t=" + std::to_string(t) + ": " + e.what());
}

}  // namespace

void WindowConfig::validate() const {
  if (width < 2) throw InvalidInput("window width must be >= 2");
  if (stride < 1) throw InvalidInput("window stride must be >= 1");
}

std::vector<WindowPair> sliding_windows(Index n_observations, const WindowConfig& config) {
  config.validate();
  if (n_observations < config.width + config.stride) {
    throw InvalidInput("series too short: " + std::to_string(n_observations) + " observations, need at least " +
                       std::to_string(config.width + config.stride) + " (width + stride)");
  }
  std::vector<WindowPair> pairs;
  for (Index t = config.width + 1; t <= n_observations; t += config.stride) {
    pairs.push_back(WindowPair{t - config.width - 1, t - config.width, config.width, t});
  }
  return pairs;
}

void PipelineConfig::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidInput("lambda must be positive");
  if (!(ridge >= 0.0) || !std::isfinite(ridge)) throw InvalidInput("ridge must be >= 0");
  for (const auto& group : groups) {
    if (group.empty()) throw InvalidInput("target groups must not be empty");
  }
}

std::vector<LabeledTarget> resolve_targets(const Dataset& ds, const PipelineConfig& config) {
  const auto& names = ds.variable_names();
  if (config.groups.empty()) {
    return singleton_targets(KernelMatrix{names, Matrix(ds.n_variables(), ds.n_variables())});
  }
  std::vector<LabeledTarget> targets;
  for (const auto& group : config.groups) {
    std::vector<Index> indices;
    for (const auto& name : group) {
      const auto it = std::find(names.begin(), names.end(), name);
      if (it == names.end()) throw InvalidInput("unknown variable '" + name + "' in target group");
      indices.push_back(static_cast<Index>(it - names.begin()));
    }
    targets.push_back({group_label(group), TargetSpec::same(std::move(indices))});
  }
  return targets;
}

std::vector<ScoreReport> score_stream(const TimeSeries& series, const WindowConfig& window,
                                      const PipelineConfig& pipeline) {
  pipeline.validate();
  const Dataset& ds = series.dataset;
  const auto pairs = sliding_windows(ds.n_observations(), window);
  const auto targets = resolve_targets(ds, pipeline);
  for (const auto& target : targets) target.spec.validate(ds.n_variables(), ds.n_variables());

  std::vector<ScoreReport> reports(pairs.size());
  parallel_for(static_cast<long>(pairs.size()), [&](long i) {
    const WindowPair& pair = pairs[static_cast<std::size_t>(i)];
    try {
      const KernelMatrix k = variable_kernel(ds.rows(pair.previous_first, pair.width), pipeline.variable_kernel,
                                             pipeline.lambda);
      const KernelMatrix k_prime = variable_kernel(ds.rows(pair.current_first, pair.width),
                                                   pipeline.variable_kernel, pipeline.lambda);
      ScoreReport report = score_targets(k.values, k_prime.values, targets, pipeline.matrix_kernel, pipeline.ridge);
      report.t = pair.t;
      if (!series.timestamps.empty()) report.timestamp = series.timestamps[static_cast<std::size_t>(pair.t - 1)];
      reports[static_cast<std::size_t>(i)] = std::move(report);
    } catch (const InvalidInput& e) {
      rethrow_annotated(e, pair.t);
    } catch (const NotPsd& e) {
      rethrow_annotated(e, pair.t);
    } catch (const NumericalError& e) {
      rethrow_annotated(e, pair.t);
    }
  });
  return reports;
}

std::string reports_to_json(const std::vector<ScoreReport>& reports, const WindowConfig& window,
                            const PipelineConfig& pipeline, const Dataset& ds) {
  using json = nlohmann::ordered_json;
  json config;
  config["window"] = window.width;
  config["stride"] = window.stride;
  config["variable_kernel"] = to_string(pipeline.variable_kernel);
  config["matrix_kernel"] = to_string(pipeline.matrix_kernel);
  config["lambda"] = pipeline.lambda;
  config["ridge"] = pipeline.ridge;
  config["variables"] = ds.variable_names();
  config["n_observations"] = ds.n_observations();
  if (pipeline.groups.empty()) {
    config["targets"] = "singletons";
  } else {
    config["targets"] = pipeline.groups;
  }

  json scores = json::array();
  for (const auto& r : reports) {
    json entry;
    if (r.timestamp) {
      entry["t"] = *r.timestamp;
    } else {
      entry["t"] = r.t;
    }
    entry["system"] = r.system_score;
    json targets = json::object();
    for (const auto& s : r.target_scores) targets[s.label] = s.value;
    entry["targets"] = std::move(targets);
    scores.push_back(std::move(entry));
  }
  json out;
  out["config"] = std::move(config);
  out["scores"] = std::move(scores);
  return out.dump(2) + "\n";
}

std::string format_double(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return ec == std::errc() ? std::string(buffer, ptr) : std::string("nan");
}

std::string reports_to_csv(const std::vector<ScoreReport>& reports) {
  std::ostringstream out;
  out << "t,system";
  if (!reports.empty()) {
    for (const auto& s : reports.front().target_scores) out << ',' << s.label;
  }
  out << '\n';
  for (const auto& r : reports) {
    out << (r.timestamp ? *r.timestamp : std::to_string(r.t)) << ',' << format_double(r.system_score);
    for (const auto& s : r.target_scores) out << ',' << format_double(s.value);
    out << '\n';
  }
  return out.str();
}

}  // namespace dks
