#include "dks/evaluation.hpp"

#include "dks/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace dks {
namespace {

Matrix select(const Matrix& m, std::span<const Index> rows, std::span<const Index> cols) {
  Matrix out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out(static_cast<Index>(i), static_cast<Index>(j)) = m(rows[i], cols[j]);
  return out;
}

Eigen::LLT<Matrix> cholesky_or_throw(const Matrix& m, const char* what) {
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) throw InvalidInput(std::string(what) + ": matrix is not positive definite");
  return llt;
}

double log_det(const Eigen::LLT<Matrix>& llt) {
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

// Conditional law of y_t given y_c under N(0, k): mean = gain * y_c.
struct Conditional {
  Matrix gain;
  Matrix covariance;
};

Conditional conditional(const Matrix& k, std::span<const Index> t, std::span<const Index> c) {
  const Matrix ktt = select(k, t, t);
  if (c.empty()) return {Matrix(static_cast<Index>(t.size()), 0), ktt};
  const Matrix ktc = select(k, t, c);
  const Matrix kcc = select(k, c, c);
  const Matrix gain = cholesky_or_throw(kcc, "mc_expected_kl").solve(ktc.transpose()).transpose();
  Matrix cov = ktt - gain * ktc.transpose();
  return {gain, 0.5 * (cov + cov.transpose())};
}

struct SideEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

// E over y_c ~ N(0, marginal) of KL(N(from.gain y_c, from.cov) || N(to.gain y_c, to.cov)).
// The KL is constant plus 1/2 y_c^T M y_c, M = (G_to - G_from)^T S_to^-1 (G_to - G_from).
SideEstimate expected_conditional_kl(const Conditional& from, const Conditional& to, const Matrix& marginal,
                                     std::size_t n, Rng& rng) {
  const Index nt = from.covariance.rows();
  const auto to_llt = cholesky_or_throw(to.covariance, "mc_expected_kl");
  const auto from_llt = cholesky_or_throw(from.covariance, "mc_expected_kl");
  const double constant =
      0.5 * ((to_llt.solve(from.covariance)).trace() - static_cast<double>(nt) + log_det(to_llt) - log_det(from_llt));
  const Index nc = marginal.rows();
  if (nc == 0) return {constant, 0.0};

  const Matrix delta = to.gain - from.gain;
  const Matrix quad = delta.transpose() * to_llt.solve(delta);
  const Matrix lower = cholesky_or_throw(marginal, "mc_expected_kl").matrixL();

  std::vector<double> values(n);
  Vector z(nc);
  for (std::size_t s = 0; s < n; ++s) {
    for (Index i = 0; i < nc; ++i) z[i] = rng.normal();
    const Vector y = lower * z;
    values[s] = constant + 0.5 * y.dot(quad * y);
  }

  // Leave-one-out jackknife of the sample mean.
  const double total = std::accumulate(values.begin(), values.end(), 0.0);
  const double nn = static_cast<double>(n);
  const double mean = total / nn;
  double ss = 0.0;
  for (double v : values) {
    const double loo = (total - v) / (nn - 1.0);
    ss += (loo - mean) * (loo - mean);
  }
  return {mean, std::sqrt((nn - 1.0) / nn * ss)};
}

}  // namespace

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Matrix random_spd(Index d, Rng& rng) {
  Matrix b(d, d);
  for (Index j = 0; j < d; ++j)
    for (Index i = 0; i < d; ++i) b(i, j) = rng.normal();
  Matrix k = b * b.transpose() / static_cast<double>(std::max<Index>(d, 1));
  k.diagonal().array() += 0.5;
  return 0.5 * (k + k.transpose());
}

double gaussian_kl(const Vector& m1, const Matrix& s1, const Vector& m2, const Matrix& s2) {
  const auto llt2 = cholesky_or_throw(s2, "gaussian_kl");
  const auto llt1 = cholesky_or_throw(s1, "gaussian_kl");
  const Vector diff = m2 - m1;
  return 0.5 * (llt2.solve(s1).trace() + diff.dot(llt2.solve(diff)) - static_cast<double>(s1.rows()) +
                log_det(llt2) - log_det(llt1));
}

McEstimate mc_expected_kl(const Matrix& k, const Matrix& k_prime, std::span<const Index> t, std::size_t n_samples,
                          std::uint64_t seed) {
  if (k.rows() != k_prime.rows() || k.rows() != k.cols() || k_prime.rows() != k_prime.cols()) {
    throw InvalidInput("mc_expected_kl: kernels must be square with equal dimensions");
  }
  if (n_samples < 2) throw InvalidInput("mc_expected_kl: need at least 2 samples");
  if (t.empty()) throw InvalidInput("mc_expected_kl: empty target");
  TargetSpec{std::vector<Index>(t.begin(), t.end()), std::vector<Index>(t.begin(), t.end())}.validate(k.rows(),
                                                                                                    k.rows());
  cholesky_or_throw(k, "mc_expected_kl");
  cholesky_or_throw(k_prime, "mc_expected_kl");

  const auto c = complement_of(t, k.rows());
  const Conditional p = conditional(k, t, c);
  const Conditional q = conditional(k_prime, t, c);

  Rng rng_p(derive_seed(seed, 0));
  Rng rng_q(derive_seed(seed, 1));
  const SideEstimate forward = expected_conditional_kl(p, q, select(k, c, c), n_samples, rng_p);
  const SideEstimate backward = expected_conditional_kl(q, p, select(k_prime, c, c), n_samples, rng_q);
  return McEstimate{2.0 * (forward.mean + backward.mean),
                    2.0 * std::hypot(forward.std_error, backward.std_error), n_samples};
}

RocResult auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw InvalidInput("auc: scores and labels differ in length");
  RocResult r;
  for (int label : labels) {
    if (label == 1) {
      ++r.n_positive;
    } else if (label == 0) {
      ++r.n_negative;
    } else {
      throw InvalidInput("auc: labels must be 0 or 1");
    }
  }
  if (r.n_positive == 0 || r.n_negative == 0) throw InvalidInput("auc: need both positive and negative labels");
  for (double s : scores) {
    if (std::isnan(s)) throw InvalidInput("auc: NaN score");
  }

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double positive_rank_sum = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double average_rank = 0.5 * static_cast<double>(i + 1 + j);  // ranks i+1 .. j
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] == 1) positive_rank_sum += average_rank;
    }
    i = j;
  }
  const double np = static_cast<double>(r.n_positive);
  const double u = positive_rank_sum - np * (np + 1.0) / 2.0;
  r.auc = u / (np * static_cast<double>(r.n_negative));
  return r;
}

ControlChartData gen_control_chart(Index n_series, std::uint64_t seed) {
  if (n_series < 2) throw InvalidInput("gen_control_chart: need at least 2 series");
  constexpr Index kSteps = 100;
  constexpr Index kHalf = 50;
  constexpr double kMean = 30.0;
  constexpr double kSpread = 2.0;

  Rng rng(seed);
  Matrix series(kSteps, n_series);
  std::vector<int> labels(static_cast<std::size_t>(n_series));
  std::vector<std::string> names;
  for (Index j = 0; j < n_series; ++j) {
    names.push_back("s" + std::to_string(j + 1));
    for (Index t = 0; t < kSteps; ++t) series(t, j) = kMean + rng.uniform(-3.0, 3.0) * kSpread;
    const bool replaced = rng.bernoulli(1.0 / 3.0);
    labels[static_cast<std::size_t>(j)] = replaced ? 1 : 0;
    if (replaced) {
      const double amplitude = rng.uniform(10.0, 15.0);
      const double period = rng.uniform(10.0, 15.0);
      for (Index t = kHalf; t < kSteps; ++t) {
        const double step = static_cast<double>(t + 1);
        series(t, j) = kMean + rng.uniform(-3.0, 3.0) * kSpread + amplitude * std::sin(2.0 * std::numbers::pi * step / period);
      }
    }
  }
  return ControlChartData{Dataset(names, series.topRows(kHalf)), Dataset(names, series.bottomRows(kHalf)),
                          std::move(labels)};
}

GroupData gen_group_experiment(std::uint64_t seed) {
  constexpr Index kObservations = 200;
  Rng rng(seed);
  auto draw = [&](Index d) {
    Matrix x(kObservations, d);
    std::vector<std::string> names;
    for (Index j = 0; j < d; ++j) {
      names.push_back("z" + std::to_string(j + 1));
      for (Index i = 0; i < kObservations; ++i) x(i, j) = rng.normal();
    }
    return Dataset(std::move(names), std::move(x));
  };
  Dataset d9 = draw(9);
  Dataset d10 = draw(10);
  return GroupData{std::move(d9), std::move(d10)};
}

std::pair<double, double> mean_and_stddev(std::span<const double> values) {
  if (values.empty()) return {0.0, 0.0};
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0))};
}

SccResult run_scc_experiment(int trials, const SccConfig& config, std::uint64_t seed) {
  if (trials < 1) throw InvalidInput("run_scc_experiment: trials must be >= 1");
  SccResult result;
  result.config = config;
  result.trial_auc.assign(static_cast<std::size_t>(trials), 0.0);
  parallel_for(trials, [&](long trial) {
    const ControlChartData data = gen_control_chart(config.n_series, derive_seed(seed, static_cast<std::uint64_t>(trial)));
    const KernelMatrix k = variable_kernel(data.before, config.variable_kernel, config.lambda);
    const KernelMatrix k_prime = variable_kernel(data.after, config.variable_kernel, config.lambda);
    const auto targets = singleton_targets(k);
    const ScoreReport report = score_targets(k.values, k_prime.values, targets, config.matrix_kernel, config.ridge);
    std::vector<double> scores;
    for (const auto& s : report.target_scores) scores.push_back(s.value);
    result.trial_auc[static_cast<std::size_t>(trial)] = auc(scores, data.labels).auc;
  });
  std::tie(result.mean_auc, result.std_auc) = mean_and_stddev(result.trial_auc);
  return result;
}

GroupExperimentResult run_group_experiment(int trials, std::uint64_t seed, double ridge) {
  if (trials < 1) throw InvalidInput("run_group_experiment: trials must be >= 1");
  std::vector<LabeledTarget> setting1;
  std::vector<LabeledTarget> setting2;
  for (Index i = 0; i < 8; ++i) setting1.push_back({"group" + std::to_string(i + 1), TargetSpec::same({i})});
  setting1.push_back({"group9", TargetSpec{{8}, {8, 9}}});
  for (Index i = 0; i < 9; ++i) setting2.push_back({"group" + std::to_string(i + 1), TargetSpec::same({i})});
  setting2.push_back({"group10", TargetSpec{{}, {9}}});

  std::vector<std::vector<double>> scores1(static_cast<std::size_t>(trials));
  std::vector<std::vector<double>> scores2(static_cast<std::size_t>(trials));
  parallel_for(trials, [&](long trial) {
    const GroupData data = gen_group_experiment(derive_seed(seed, static_cast<std::uint64_t>(trial)));
    const Matrix k = covariance_kernel(data.d9).values;
    const Matrix k_prime = covariance_kernel(data.d10).values;
    for (const auto& s : score_targets(k, k_prime, setting1, MatrixKernelKind::GaussianMatrixKernel, ridge).target_scores)
      scores1[static_cast<std::size_t>(trial)].push_back(s.value);
    for (const auto& s : score_targets(k, k_prime, setting2, MatrixKernelKind::GaussianMatrixKernel, ridge).target_scores)
      scores2[static_cast<std::size_t>(trial)].push_back(s.value);
  });

  auto collect = [&](const std::vector<LabeledTarget>& targets, const std::vector<std::vector<double>>& scores) {
    std::vector<GroupStat> stats;
    for (std::size_t g = 0; g < targets.size(); ++g) {
      GroupStat stat;
      stat.label = targets[g].label;
      stat.changed = g + 1 == targets.size();
      for (const auto& trial_scores : scores) stat.scores.push_back(trial_scores[g]);
      std::tie(stat.mean, stat.stddev) = mean_and_stddev(stat.scores);
      stats.push_back(std::move(stat));
    }
    return stats;
  };
  return GroupExperimentResult{collect(setting1, scores1), collect(setting2, scores2)};
}

std::string to_string(VariableKernelKind kind) {
  switch (kind) {
    case VariableKernelKind::Covariance:
      return "covariance";
    case VariableKernelKind::Correlation:
      return "correlation";
    case VariableKernelKind::Diffusion:
      return "diffusion";
  }
  return "unknown";
}

std::string to_string(MatrixKernelKind kind) {
  return kind == MatrixKernelKind::DotProduct ? "dot" : "matrix";
}

}  // namespace dks
