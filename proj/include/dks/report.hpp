#pragma once

#include "dks/evaluation.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace dks {

/// JSON summary of one or more control-chart runs: config, mean, std per run.
std::string scc_to_json(const std::vector<SccResult>& runs, int trials, std::uint64_t seed);
/// One row per (run, trial): variable_kernel,matrix_kernel,trial,auc.
std::string scc_to_csv(const std::vector<SccResult>& runs);

std::string groups_to_json(const GroupExperimentResult& result, int trials, std::uint64_t seed);
/// One row per (setting, trial) with a column per group.
std::string groups_to_csv(const GroupExperimentResult& result);

struct OracleCheck {
  Index dim = 0;
  std::vector<Index> target;
  double trace_score = 0.0;
  McEstimate mc;
};

std::string oracle_to_json(const OracleCheck& check, std::uint64_t seed);

}  // namespace dks
