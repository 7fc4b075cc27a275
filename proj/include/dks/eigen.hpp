#pragma once

#include "dks/types.hpp"

namespace dks {

/// Eigenpairs of a symmetric matrix. Column k of `vectors` pairs with `values[k]`.
/// Values are sorted descending; vectors have unit norm and the sign convention
/// applied (component sum >= 0, or first significant component > 0 when the
/// sum vanishes).
struct EigenDecomposition {
  Vector values;
  Matrix vectors;

  Index dim() const noexcept { return values.size(); }
  /// U diag(values) U^T.
  Matrix reconstruct() const;
};

inline constexpr double kSymmetryTol = 1e-9;
inline constexpr double kDegeneracyTol = 1e-9;

/// 1e-8 * max(1, trace/d); eigenvalues in [-tol, 0) are clamped to 0.
double psd_clamp_tolerance(const Matrix& m);

/// Eigendecomposition of a symmetric PSD matrix by cyclic Jacobi rotations.
/// `tol` bounds |m_ij - m_ji| relative to max(1, max|m|). A 0x0 input yields an
/// empty decomposition. Throws InvalidInput when asymmetric and NotPsd when an
/// eigenvalue lies below -psd_clamp_tolerance(m).
EigenDecomposition sym_eigen(const Matrix& m, double tol = kSymmetryTol);

/// Makes the decomposition unique. Inside each block of (near-)equal eigenvalues
/// the vectors are rotated pairwise so that each successive vector maximizes the
/// L1 norm of its components, the sign convention is re-applied, and the block
/// is ordered by descending component mean, then descending component standard
/// deviation. Spectra without degeneracies pass through unchanged.
EigenDecomposition canonicalize(EigenDecomposition e, double degeneracy_tol = kDegeneracyTol);

/// canonicalize(sym_eigen(m)).
EigenDecomposition canonical_eigen(const Matrix& m);

/// exp(scale * m) for symmetric m, through its (unclamped) spectrum.
Matrix sym_matrix_exp(const Matrix& m, double scale);

/// Flips each column so that it satisfies the sign convention.
void apply_sign_convention(Matrix& vectors);

namespace detail {

/// Raw cyclic Jacobi: unsorted, unclamped, no sign convention. The input must
/// already be symmetric. Throws NumericalError after 100 sweeps.
EigenDecomposition jacobi(Matrix a);

/// Angle in [0, pi) maximizing sum_i |cos(t) a_i + sin(t) b_i|.
double best_rotation_angle(const Vector& a, const Vector& b);

}  // namespace detail

}  // namespace dks
