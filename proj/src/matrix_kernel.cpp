#include "dks/matrix_kernel.hpp"

#include "dks/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace dks {

std::vector<EigenFeature> eigen_features(const EigenDecomposition& e) {
  std::vector<EigenFeature> out;
  out.reserve(static_cast<std::size_t>(e.dim()));
  for (Index k = 0; k < e.dim(); ++k) {
    const auto u = e.vectors.col(k);
    const double mu = u.mean();
    const double sigma = std::sqrt((u.array() - mu).square().mean());
    out.push_back(EigenFeature{e.values[k], mu, std::max(sigma, kSigmaFloor)});
  }
  return out;
}

double vector_kernel(const EigenFeature& f1, const EigenFeature& f2) {
  const double var = f1.sigma * f1.sigma + f2.sigma * f2.sigma;
  const double dmu = f1.mu - f2.mu;
  return std::sqrt(2.0 * f1.sigma * f2.sigma / var) * std::exp(-dmu * dmu / (4.0 * var));
}

double vector_kernel_squared(const EigenFeature& f1, const EigenFeature& f2) {
  const double var = f1.sigma * f1.sigma + f2.sigma * f2.sigma;
  const double dmu = f1.mu - f2.mu;
  return (2.0 * f1.sigma * f2.sigma / var) * std::exp(-dmu * dmu / (2.0 * var));
}

double matrix_kernel(std::span<const EigenFeature> a, std::span<const EigenFeature> b) {
  const long rows = static_cast<long>(a.size());
  if (rows == 0 || b.empty()) return 0.0;
  std::vector<double> partial(a.size(), 0.0);
  parallel_for(rows, [&](long k) {
    const EigenFeature& fk = a[static_cast<std::size_t>(k)];
    double s = 0.0;
    for (const EigenFeature& fl : b) s += fl.eigenvalue * vector_kernel_squared(fk, fl);
    partial[static_cast<std::size_t>(k)] = fk.eigenvalue * s;
  });
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

double dot_product_kernel(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InvalidInput("dot product kernel: dimensions differ (" + std::to_string(a.rows()) + " vs " +
                       std::to_string(b.rows()) + ")");
  }
  return a.cwiseProduct(b).sum();
}

double matrix_kernel(const Matrix& a, const Matrix& b, MatrixKernelKind kind) {
  if (kind == MatrixKernelKind::DotProduct) return dot_product_kernel(a, b);
  if (a.size() == 0 || b.size() == 0) return 0.0;
  const auto fa = eigen_features(canonical_eigen(a));
  const auto fb = eigen_features(canonical_eigen(b));
  return matrix_kernel(fa, fb);
}

namespace reference {

double matrix_kernel(std::span<const EigenFeature> a, std::span<const EigenFeature> b) {
  double total = 0.0;
  for (const auto& fk : a) {
    for (const auto& fl : b) {
      const double kv = vector_kernel(fk, fl);
      total += scalar_kernel(fk.eigenvalue, fl.eigenvalue) * kv * kv;
    }
  }
  return total;
}

}  // namespace reference

}  // namespace dks
