#pragma once

#include "dks/eigen.hpp"

#include <span>
#include <vector>

namespace dks {

enum class MatrixKernelKind {
  GaussianMatrixKernel,  // eigenvalue products times squared Bhattacharyya overlaps
  DotProduct,            // tr[A B]; equal dimensions only
};

inline constexpr double kSigmaFloor = 1e-9;

/// Summary of one eigenpair: its eigenvalue and the mean / population standard
/// deviation of its eigenvector's components, the latter floored at kSigmaFloor.
struct EigenFeature {
  double eigenvalue = 0.0;
  double mu = 0.0;
  double sigma = kSigmaFloor;
};

std::vector<EigenFeature> eigen_features(const EigenDecomposition& e);

inline double scalar_kernel(double l1, double l2) { return l1 * l2; }

/// Bhattacharyya coefficient of N(mu1, sigma1^2) and N(mu2, sigma2^2).
double vector_kernel(const EigenFeature& f1, const EigenFeature& f2);

/// vector_kernel squared, evaluated directly as ratio * exp without the sqrt.
double vector_kernel_squared(const EigenFeature& f1, const EigenFeature& f2);

/// sum_k sum_l K_s(l_k, l'_l) K_v(u_k, u'_l)^2 over precomputed features.
/// Rows are evaluated in parallel and summed in a fixed order.
double matrix_kernel(std::span<const EigenFeature> a, std::span<const EigenFeature> b);

/// sum_ij a_ij b_ij, which is tr[a b] for symmetric inputs.
double dot_product_kernel(const Matrix& a, const Matrix& b);

/// Kernel between two PSD matrices of dimensions d and d'. Either input may be
/// 0x0, in which case the result is 0. DotProduct requires d == d'.
double matrix_kernel(const Matrix& a, const Matrix& b, MatrixKernelKind kind);

namespace reference {

/// Plain serial double loop, no parallel decomposition of the sum.
double matrix_kernel(std::span<const EigenFeature> a, std::span<const EigenFeature> b);

}  // namespace reference

}  // namespace dks
