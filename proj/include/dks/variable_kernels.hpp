#pragma once

#include "dks/dataset.hpp"

namespace dks {

enum class VariableKernelKind { Covariance, Correlation, Diffusion };

inline constexpr double kDefaultDiffusionLambda = 1.0;

/// Sample covariance between variables (denominator n - 1).
/// Throws InvalidInput with fewer than two observations.
KernelMatrix covariance_kernel(const Dataset& ds);

/// Pearson correlation between variables. The diagonal is exactly 1; a constant
/// variable has zero correlation with every other variable.
KernelMatrix correlation_kernel(const Dataset& ds);

/// L_ij = (sum_k |C_ik|) delta_ij - |C_ij| for a correlation matrix C.
Matrix graph_laplacian(const Matrix& correlation);

/// exp(-lambda L) with L the Laplacian of the absolute correlation graph.
KernelMatrix diffusion_kernel(const Dataset& ds, double lambda = kDefaultDiffusionLambda);

KernelMatrix variable_kernel(const Dataset& ds, VariableKernelKind kind,
                             double lambda = kDefaultDiffusionLambda);

namespace reference {

/// Serial two-pass covariance, kept as the oracle for the OpenMP kernel.
KernelMatrix covariance_kernel(const Dataset& ds);

}  // namespace reference

}  // namespace dks
