#include "dks/variable_kernels.hpp"

#include "dks/eigen.hpp"
#include "dks/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace dks {
namespace {

void require_observations(const Dataset& ds, const char* op) {
  if (ds.n_observations() < 2) {
    throw InvalidInput(std::string(op) + ": need at least 2 observations, got " +
                       std::to_string(ds.n_observations()));
  }
}

}  // namespace

KernelMatrix covariance_kernel(const Dataset& ds) {
  require_observations(ds, "covariance_kernel");
  const Index n = ds.n_observations();
  const Index d = ds.n_variables();
  const Matrix centered = ds.data().rowwise() - ds.data().colwise().mean();
  Matrix cov(d, d);
  const double denom = static_cast<double>(n - 1);
  parallel_for(d, [&](long i) {
    for (Index j = i; j < d; ++j) {
      const double c = centered.col(i).dot(centered.col(j)) / denom;
      cov(i, j) = c;
      cov(j, i) = c;
    }
  });
  return KernelMatrix{ds.variable_names(), std::move(cov)};
}

KernelMatrix correlation_kernel(const Dataset& ds) {
  KernelMatrix k = covariance_kernel(ds);
  const Index d = k.dim();
  Vector stddev(d);
  std::vector<bool> constant(static_cast<std::size_t>(d));
  for (Index i = 0; i < d; ++i) {
    stddev[i] = std::sqrt(std::max(0.0, k.values(i, i)));
    const double magnitude = ds.data().col(i).cwiseAbs().maxCoeff();
    constant[static_cast<std::size_t>(i)] = stddev[i] <= 1e-12 * std::max(magnitude, 1e-300);
  }
  for (Index i = 0; i < d; ++i) {
    for (Index j = i; j < d; ++j) {
      double r;
      if (i == j) {
        r = 1.0;
      } else if (constant[static_cast<std::size_t>(i)] || constant[static_cast<std::size_t>(j)]) {
        r = 0.0;
      } else {
        r = std::clamp(k.values(i, j) / (stddev[i] * stddev[j]), -1.0, 1.0);
      }
      k.values(i, j) = r;
      k.values(j, i) = r;
    }
  }
  return k;
}

Matrix graph_laplacian(const Matrix& correlation) {
  const Matrix weights = correlation.cwiseAbs();
  Matrix laplacian = -weights;
  laplacian.diagonal() += weights.rowwise().sum();
  return laplacian;
}

KernelMatrix diffusion_kernel(const Dataset& ds, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidInput("diffusion_kernel: lambda must be positive");
  KernelMatrix c = correlation_kernel(ds);
  return KernelMatrix{std::move(c.variable_names), sym_matrix_exp(graph_laplacian(c.values), -lambda)};
}

KernelMatrix variable_kernel(const Dataset& ds, VariableKernelKind kind, double lambda) {
  switch (kind) {
    case VariableKernelKind::Covariance:
      return covariance_kernel(ds);
    case VariableKernelKind::Correlation:
      return correlation_kernel(ds);
    case VariableKernelKind::Diffusion:
      return diffusion_kernel(ds, lambda);
  }
  throw InvalidInput("variable_kernel: unknown kind");
}

namespace reference {

KernelMatrix covariance_kernel(const Dataset& ds) {
  require_observations(ds, "covariance_kernel");
  const Matrix& x = ds.data();
  const Index n = x.rows();
  const Index d = x.cols();
  std::vector<double> mean(static_cast<std::size_t>(d), 0.0);
  for (Index j = 0; j < d; ++j) {
    for (Index r = 0; r < n; ++r) mean[static_cast<std::size_t>(j)] += x(r, j);
    mean[static_cast<std::size_t>(j)] /= static_cast<double>(n);
  }
  Matrix cov(d, d);
  for (Index i = 0; i < d; ++i) {
    for (Index j = i; j < d; ++j) {
      double s = 0.0;
      for (Index r = 0; r < n; ++r) {
        s += (x(r, i) - mean[static_cast<std::size_t>(i)]) * (x(r, j) - mean[static_cast<std::size_t>(j)]);
      }
      cov(i, j) = cov(j, i) = s / static_cast<double>(n - 1);
    }
  }
  return KernelMatrix{ds.variable_names(), std::move(cov)};
}

}  // namespace reference

}  // namespace dks
