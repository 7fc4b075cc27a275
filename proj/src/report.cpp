#include "dks/report.hpp"

#include "dks/pipeline.hpp"

#include <json.hpp>

#include <sstream>

namespace dks {

using json = nlohmann::ordered_json;

std::string scc_to_json(const std::vector<SccResult>& runs, int trials, std::uint64_t seed) {
  json out;
  out["experiment"] = "control_chart";
  out["trials"] = trials;
  out["seed"] = seed;
  json rows = json::array();
  for (const auto& run : runs) {
    json row;
    row["variable_kernel"] = to_string(run.config.variable_kernel);
    row["matrix_kernel"] = to_string(run.config.matrix_kernel);
    row["lambda"] = run.config.lambda;
    row["ridge"] = run.config.ridge;
    row["n_series"] = run.config.n_series;
    row["mean_auc"] = run.mean_auc;
    row["std_auc"] = run.std_auc;
    rows.push_back(std::move(row));
  }
  out["results"] = std::move(rows);
  return out.dump(2) + "\n";
}

std::string scc_to_csv(const std::vector<SccResult>& runs) {
  std::ostringstream out;
  out << "variable_kernel,matrix_kernel,trial,auc\n";
  for (const auto& run : runs) {
    for (std::size_t i = 0; i < run.trial_auc.size(); ++i) {
      out << to_string(run.config.variable_kernel) << ',' << to_string(run.config.matrix_kernel) << ',' << i << ','
          << format_double(run.trial_auc[i]) << '\n';
    }
  }
  return out.str();
}

std::string groups_to_json(const GroupExperimentResult& result, int trials, std::uint64_t seed) {
  auto setting = [](const std::vector<GroupStat>& stats) {
    json groups = json::array();
    for (const auto& g : stats) {
      json row;
      row["group"] = g.label;
      row["changed"] = g.changed;
      row["mean"] = g.mean;
      row["std"] = g.stddev;
      groups.push_back(std::move(row));
    }
    return groups;
  };
  json out;
  out["experiment"] = "group_change";
  out["variable_kernel"] = "covariance";
  out["matrix_kernel"] = "matrix";
  out["trials"] = trials;
  out["seed"] = seed;
  out["setting1"] = setting(result.setting1);
  out["setting2"] = setting(result.setting2);
  return out.dump(2) + "\n";
}

std::string groups_to_csv(const GroupExperimentResult& result) {
  std::ostringstream out;
  auto emit = [&](const std::vector<GroupStat>& stats, int setting) {
    out << "setting,trial";
    for (const auto& g : stats) out << ',' << g.label;
    out << '\n';
    const std::size_t trials = stats.empty() ? 0 : stats.front().scores.size();
    for (std::size_t t = 0; t < trials; ++t) {
      out << setting << ',' << t;
      for (const auto& g : stats) out << ',' << format_double(g.scores[t]);
      out << '\n';
    }
  };
  emit(result.setting1, 1);
  emit(result.setting2, 2);
  return out.str();
}

std::string oracle_to_json(const OracleCheck& check, std::uint64_t seed) {
  json out;
  out["dim"] = check.dim;
  out["target"] = check.target;
  out["seed"] = seed;
  out["samples"] = check.mc.n_samples;
  out["trace_score"] = check.trace_score;
  out["mc_estimate"] = check.mc.estimate;
  out["mc_std_error"] = check.mc.std_error;
  const double diff = check.trace_score - check.mc.estimate;
  out["z"] = check.mc.std_error > 0.0 ? diff / check.mc.std_error : 0.0;
  return out.dump(2) + "\n";
}

}  // namespace dks
