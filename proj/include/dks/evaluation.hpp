#pragma once

#include "dks/dataset.hpp"
#include "dks/matrix_kernel.hpp"
#include "dks/scoring.hpp"
#include "dks/variable_kernels.hpp"

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace dks {

/// mt19937_64 with hand-rolled uniform and normal draws, so that sequences are
/// identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  bool bernoulli(double p) { return uniform() < p; }
  double normal();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// splitmix64 of (master, stream): independent per-trial seeds.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

/// B B^T / d + 0.5 I with B standard normal: well conditioned, generic spectrum.
Matrix random_spd(Index d, Rng& rng);

/// Zero-mean Gaussian N(0, covariance).
struct GaussianModel {
  Matrix covariance;
};

/// KL(N(m1, s1) || N(m2, s2)).
double gaussian_kl(const Vector& m1, const Matrix& s1, const Vector& m2, const Matrix& s2);

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t n_samples = 0;
};

/// 2 E_p[KL(p(y_t|y_c) || p'(y_t|y_c))] + 2 E_p'[KL(p'(y_t|y_c) || p(y_t|y_c))]
/// for p = N(0, k), p' = N(0, k_prime), with t = t' and c its complement. Each
/// expectation draws y_c from its own marginal `n_samples` times; the
/// conditional KL per draw is exact. The standard error is the jackknife one.
/// Throws InvalidInput unless both matrices are positive definite.
McEstimate mc_expected_kl(const Matrix& k, const Matrix& k_prime, std::span<const Index> t,
                          std::size_t n_samples, std::uint64_t seed);

struct RocResult {
  double auc = 0.0;
  std::size_t n_positive = 0;
  std::size_t n_negative = 0;
};

/// Mann-Whitney AUC with average ranks for ties. Labels are 0 or 1 and both
/// classes must be present.
RocResult auc(std::span<const double> scores, std::span<const int> labels);

struct ControlChartData {
  Dataset before;           // steps 1..50
  Dataset after;            // steps 51..100
  std::vector<int> labels;  // 1 where steps 51..100 were replaced by the cyclic pattern
};

/// Normal pattern y = 30 + 2 r, r ~ U(-3, 3). With probability 1/3 a series'
/// second half is replaced by the cyclic pattern, which adds a sin(2 pi t / T)
/// with a, T ~ U(10, 15).
ControlChartData gen_control_chart(Index n_series, std::uint64_t seed);

struct GroupData {
  Dataset d9;   // 200 x 9 standard normal
  Dataset d10;  // 200 x 10 standard normal
};

GroupData gen_group_experiment(std::uint64_t seed);

struct SccConfig {
  VariableKernelKind variable_kernel = VariableKernelKind::Diffusion;
  MatrixKernelKind matrix_kernel = MatrixKernelKind::GaussianMatrixKernel;
  double lambda = kDefaultDiffusionLambda;
  double ridge = kDefaultRidge;
  Index n_series = 60;
};

struct SccResult {
  SccConfig config;
  double mean_auc = 0.0;
  double std_auc = 0.0;  // sample standard deviation over trials
  std::vector<double> trial_auc;
};

/// Scores every series as a singleton target and computes the AUC against the
/// replacement labels, once per trial. Trial i uses derive_seed(seed, i), so
/// different configurations at the same seed see the same data.
SccResult run_scc_experiment(int trials, const SccConfig& config, std::uint64_t seed);

struct GroupStat {
  std::string label;
  bool changed = false;
  double mean = 0.0;
  double stddev = 0.0;
  std::vector<double> scores;
};

struct GroupExperimentResult {
  std::vector<GroupStat> setting1;  // groups 1..9, group 9 = {z9} vs {z9, z10}
  std::vector<GroupStat> setting2;  // groups 1..10, group 10 = {} vs {z10}
};

/// Covariance kernel and Gaussian Matrix Kernel on the 9- vs 10-variable data.
GroupExperimentResult run_group_experiment(int trials, std::uint64_t seed, double ridge = kDefaultRidge);

/// Mean and sample standard deviation.
std::pair<double, double> mean_and_stddev(std::span<const double> values);

std::string to_string(VariableKernelKind kind);
std::string to_string(MatrixKernelKind kind);

}  // namespace dks
