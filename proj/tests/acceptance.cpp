// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include "dks/evaluation.hpp"
#include "dks/scoring.hpp"

#include "test_support.hpp"

#include <chrono>
#include <cstdio>
#include <numeric>
#include <string>

using namespace dks;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  failures += ok ? 0 : 1;
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

double mk(const Matrix& a, const Matrix& b) { return matrix_kernel(a, b, MatrixKernelKind::GaussianMatrixKernel); }

std::vector<Index> random_subset(Index d, Rng& rng) {
  auto p = testing::random_permutation(d, rng);
  const auto size = 1 + static_cast<Index>(rng.uniform() * static_cast<double>(d - 1));
  p.resize(static_cast<std::size_t>(std::min(size, d - 1 > 0 ? d - 1 : 1)));
  return p;
}

void scc_criteria() {
  const auto start = std::chrono::steady_clock::now();
  auto run = [](VariableKernelKind vk, MatrixKernelKind mk_kind) {
    SccConfig config;
    config.variable_kernel = vk;
    config.matrix_kernel = mk_kind;
    return run_scc_experiment(100, config, 1);
  };
  const auto diff_matrix = run(VariableKernelKind::Diffusion, MatrixKernelKind::GaussianMatrixKernel);
  const auto diff_dot = run(VariableKernelKind::Diffusion, MatrixKernelKind::DotProduct);
  const auto cov_dot = run(VariableKernelKind::Covariance, MatrixKernelKind::DotProduct);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const bool ordered = diff_matrix.mean_auc > diff_dot.mean_auc && diff_dot.mean_auc > cov_dot.mean_auc;
  report(1, diff_matrix.mean_auc >= 0.85 && diff_dot.mean_auc >= 0.75 && ordered,
         fmt("diffusion+matrix %.4f+-%.3f (>=0.85), diffusion+dot %.4f+-%.3f (>=0.75), covariance+dot %.4f, "
             "ordering %s, %.0fs",
             diff_matrix.mean_auc, diff_matrix.std_auc, diff_dot.mean_auc, diff_dot.std_auc, cov_dot.mean_auc,
             ordered ? "holds" : "violated", seconds));
  report(2, cov_dot.mean_auc >= 0.55 && cov_dot.mean_auc <= 0.80,
         fmt("covariance+dot %.3f+-%.3f in [0.55, 0.80]", cov_dot.mean_auc, cov_dot.std_auc));
}

bool group_setting_ok(const std::vector<GroupStat>& groups, std::string& detail) {
  double max_unchanged = -1e300, pooled_var = 0.0, changed = 0.0;
  int unchanged = 0;
  for (const auto& g : groups) {
    if (g.changed) {
      changed = g.mean;
      continue;
    }
    max_unchanged = std::max(max_unchanged, g.mean);
    pooled_var += g.stddev * g.stddev;
    ++unchanged;
  }
  const double pooled = std::sqrt(pooled_var / unchanged);
  detail = fmt("changed %.4f vs max unchanged %.4f + pooled sd %.4f", changed, max_unchanged, pooled);
  return changed > max_unchanged + pooled;
}

void group_criterion() {
  const auto result = run_group_experiment(100, 1);
  std::string d1, d2;
  const bool s1 = group_setting_ok(result.setting1, d1);
  const bool s2 = group_setting_ok(result.setting2, d2);
  report(3, s1 && s2, "setting 1: " + d1 + (s1 ? " ok" : " not separated") + "; setting 2: " + d2 +
                          (s2 ? " ok" : " not separated"));
}

void oracle_criterion() {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(2024);
  int matched = 0;
  double worst_z = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const Index d = 2 + trial % 5;
    const Matrix k = random_spd(d, rng), kp = random_spd(d, rng);
    const auto t = random_subset(d, rng);
    const auto est = mc_expected_kl(k, kp, t, 20000, derive_seed(77, static_cast<std::uint64_t>(trial)));
    const double trace = target_score_trace(k, kp, TargetSpec::same(t), 0.0);
    const double z = std::abs(est.estimate - trace) / est.std_error;
    worst_z = std::max(worst_z, z);
    matched += z <= 3.0;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report(4, matched == 20 && seconds < 60.0,
         fmt("%d/20 within 3 standard errors, worst |z| %.2f, %.1fs", matched, worst_z, seconds));
}

void reduction_criterion() {
  Rng rng(2025);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Index d = 1 + trial % 8;
    const Matrix k = random_spd(d, rng), kp = random_spd(d, rng);
    const auto t = testing::random_permutation(d, rng);
    const auto tp = testing::random_permutation(d, rng);
    const auto m = static_cast<std::size_t>(1 + trial % d);
    const TargetSpec spec{{t.begin(), t.begin() + m}, {tp.begin(), tp.begin() + m}};
    const double trace = target_score_trace(k, kp, spec);
    const double dot = target_score_kernelized(k, kp, spec, MatrixKernelKind::DotProduct);
    worst = std::max(worst, testing::relative_error(dot, trace));
  }
  report(5, worst <= 1e-9, fmt("worst relative difference %.2e over 100 instances", worst));
}

void permutation_criterion() {
  Rng rng(2026);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Index d = 2 + trial % 7, dp = 2 + (trial * 3) % 7;
    const Matrix a = testing::random_nondegenerate_psd(d, rng);
    const Matrix b = testing::random_nondegenerate_psd(dp, rng);
    const auto p = testing::random_permutation(d, rng);
    const auto q = testing::random_permutation(dp, rng);
    worst = std::max(worst, testing::relative_error(mk(a, b), mk(testing::permute(a, p), testing::permute(b, q))));
  }
  report(6, worst <= 1e-8, fmt("worst relative change %.2e over 100 trials", worst));
}

void identity_criterion() {
  Rng rng(2027);
  double worst_identity = 0.0, min_trace = 1e300;
  for (int trial = 0; trial < 100; ++trial) {
    const Index d = 1 + trial % 8;
    const Matrix k = random_spd(d, rng);
    const auto t = testing::random_permutation(d, rng);
    const TargetSpec spec = TargetSpec::same({t.begin(), t.begin() + 1 + trial % d});
    worst_identity = std::max({worst_identity, std::abs(target_score_trace(k, k, spec)),
                               std::abs(target_score_kernelized(k, k, spec, MatrixKernelKind::DotProduct)),
                               std::abs(target_score_kernelized(k, k, spec, MatrixKernelKind::GaussianMatrixKernel)),
                               std::abs(system_score(k, k, MatrixKernelKind::GaussianMatrixKernel))});
    const Matrix kp = random_spd(d, rng);
    min_trace = std::min(min_trace, target_score_trace(k, kp, spec, 0.0));
  }
  report(7, worst_identity <= 1e-10 && min_trace >= -1e-8,
         fmt("max |score(K,K)| %.2e, min trace score %.2e over 100 trials", worst_identity, min_trace));
}

void gram_criterion() {
  Rng rng(2028);
  double worst = 1e300;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 7;
    std::vector<Matrix> ms;
    for (int i = 0; i < n; ++i) ms.push_back(random_spd(1 + static_cast<Index>(rng.uniform() * 8.0), rng));
    Matrix gram(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) gram(i, j) = mk(ms[i], ms[j]);
    gram = (0.5 * (gram + gram.transpose())).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> solver(gram);
    worst = std::min(worst, solver.eigenvalues().minCoeff() / (gram.trace() / n));
  }
  report(8, worst >= -1e-8, fmt("min eigenvalue / (trace/n) %.2e over 50 Gram matrices", worst));
}

void mixed_dimension_criterion() {
  Rng rng(2029);
  int finite = 0;
  std::string error;
  for (int trial = 0; trial < 100; ++trial) {
    try {
      const double s = system_score(random_spd(9, rng), random_spd(10, rng), MatrixKernelKind::GaussianMatrixKernel);
      finite += std::isfinite(s);
    } catch (const std::exception& e) {
      error = e.what();
    }
  }
  report(9, finite == 100, fmt("%d/100 finite", finite) + (error.empty() ? "" : ", error: " + error));
}

}  // namespace

int main() {
  scc_criteria();
  group_criterion();
  oracle_criterion();
  reduction_criterion();
  permutation_criterion();
  identity_criterion();
  gram_criterion();
  mixed_dimension_criterion();
  return failures == 0 ? 0 : 1;
}
