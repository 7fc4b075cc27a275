#pragma once

#include "dks/dataset.hpp"
#include "dks/matrix_kernel.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dks {

inline constexpr double kDefaultRidge = 1e-8;

/// Target variables on each side: `t` indexes K, `t_prime` indexes K'.
/// Both lists are kept in the given order. At least one side is non-empty; a
/// one-sided target (one list empty) is only meaningful for the Gaussian
/// Matrix Kernel, where the empty side contributes 0x0 blocks.
struct TargetSpec {
  std::vector<Index> t;
  std::vector<Index> t_prime;

  /// Same index list on both sides.
  static TargetSpec same(std::vector<Index> indices) { return {indices, indices}; }
  /// Throws InvalidInput on out-of-range or duplicate indices, or when both sides are empty.
  void validate(Index d, Index d_prime) const;
};

/// K split into target rows/columns (in target order) and the complement
/// (ascending original order).
struct PartitionedKernel {
  Matrix full;
  Matrix target_block;      // K_tt
  Matrix complement_block;  // K_cc, possibly 0x0
  Matrix target_complement; // K_tc
  Matrix complement_target; // K_ct
  std::vector<Index> target;
  std::vector<Index> complement;
};

PartitionedKernel partition(const Matrix& k, std::span<const Index> indices);

/// Ascending indices of [0, d) not in `indices`.
std::vector<Index> complement_of(std::span<const Index> indices, Index d);

/// k[indices, indices].
Matrix submatrix(const Matrix& k, std::span<const Index> indices);

/// Inverse of (k + ridge * g I) with g = max(1, trace/d), through the spectrum
/// of k. A 0x0 input returns 0x0. Throws InvalidInput if the shifted matrix is
/// singular (only possible with ridge == 0).
Matrix inv_psd(const Matrix& k, double ridge = kDefaultRidge);

/// tr[x y^-1] - log det(x y^-1) + m, with y regularized as in inv_psd.
double burg_divergence(const Matrix& x, const Matrix& y, double ridge = kDefaultRidge);

/// Symmetrized Burg divergence D_B(x||y) + D_B(y||x).
double symmetric_burg_divergence(const Matrix& x, const Matrix& y, double ridge = kDefaultRidge);

/// Trace-form target score. Requires dim(K) == dim(K') and |t| == |t'|.
/// Complement terms vanish when the complement is empty, giving the system score.
double target_score_trace(const Matrix& k, const Matrix& k_prime, const TargetSpec& spec,
                          double ridge = kDefaultRidge);

/// [K_M(K,K'^-1) + K_M(K',K^-1) - K_M(K,K^-1) - K_M(K',K'^-1)] minus the same
/// bracket over the complement blocks. With the Gaussian Matrix Kernel the two
/// sides may have different dimensions.
double target_score_kernelized(const Matrix& k, const Matrix& k_prime, const TargetSpec& spec,
                               MatrixKernelKind kind, double ridge = kDefaultRidge);

/// target_score_kernelized with every variable on both sides as target.
double system_score(const Matrix& k, const Matrix& k_prime, MatrixKernelKind kind,
                    double ridge = kDefaultRidge);

struct TargetScore {
  std::string label;
  double value = 0.0;
};

struct ScoreReport {
  /// Position of the scored pair (1-based index of the last observation of the
  /// later window), or 0 for a one-off comparison.
  Index t = 0;
  std::optional<std::string> timestamp;
  double system_score = 0.0;
  std::vector<TargetScore> target_scores;
};

struct LabeledTarget {
  std::string label;
  TargetSpec spec;
};

/// One target per variable. Labels are variable names; both kernels must carry
/// the same names in the same order.
std::vector<LabeledTarget> singleton_targets(const KernelMatrix& k);

/// Label for a group of variable names: names joined with '+'.
std::string group_label(std::span<const std::string> names);

/// System score plus one score per target, sharing the spectra of the full
/// kernels across targets. Targets are scored in parallel.
ScoreReport score_targets(const Matrix& k, const Matrix& k_prime, std::span<const LabeledTarget> targets,
                          MatrixKernelKind kind, double ridge = kDefaultRidge);

namespace reference {

/// Literal evaluation: every inverse through inv_psd, every kernel through
/// matrix_kernel on the explicit matrices.
double target_score_kernelized(const Matrix& k, const Matrix& k_prime, const TargetSpec& spec,
                               MatrixKernelKind kind, double ridge = kDefaultRidge);

}  // namespace reference

}  // namespace dks
