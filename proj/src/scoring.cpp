#include "dks/scoring.hpp"

#include "dks/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace dks {
namespace {

double ridge_scale(const Matrix& k) {
  const Index d = k.rows();
  return d == 0 ? 1.0 : std::max(1.0, k.trace() / static_cast<double>(d));
}

void require_same_dims(const Matrix& a, const Matrix& b, const char* op) {
  if (a.rows() != b.rows()) {
    throw InvalidInput(std::string(op) + ": dimensions differ (" + std::to_string(a.rows()) + " vs " +
                       std::to_string(b.rows()) + ")");
  }
}

// Everything one side of a bracket needs: the block itself and, depending on
// the kernel, either its regularized inverse or the eigenfeatures of both the
// block and its inverse. The inverse shares the block's eigenvectors, so its
// features are the block's with eigenvalues mapped to 1 / (lambda + ridge g).
struct Spectrum {
  Matrix block;
  Matrix inverse;
  std::vector<EigenFeature> features;
  std::vector<EigenFeature> inverse_features;
};

Spectrum make_spectrum(Matrix block, MatrixKernelKind kind, double ridge) {
  Spectrum s;
  if (kind == MatrixKernelKind::DotProduct) {
    s.inverse = inv_psd(block, ridge);
  } else if (block.size() > 0) {
    s.features = eigen_features(canonical_eigen(block));
    const double shift = ridge * ridge_scale(block);
    s.inverse_features = s.features;
    for (auto& f : s.inverse_features) {
      const double shifted = f.eigenvalue + shift;
      if (!(shifted > 0.0)) throw InvalidInput("inverse of singular matrix; use a positive ridge");
      f.eigenvalue = 1.0 / shifted;
    }
  }
  s.block = std::move(block);
  return s;
}

double bracket(const Spectrum& a, const Spectrum& b, MatrixKernelKind kind) {
  if (kind == MatrixKernelKind::DotProduct) {
    return dot_product_kernel(a.block, b.inverse) + dot_product_kernel(b.block, a.inverse) -
           dot_product_kernel(a.block, a.inverse) - dot_product_kernel(b.block, b.inverse);
  }
  return matrix_kernel(a.features, b.inverse_features) + matrix_kernel(b.features, a.inverse_features) -
         matrix_kernel(a.features, a.inverse_features) - matrix_kernel(b.features, b.inverse_features);
}

void validate_for_kind(const Matrix& k, const Matrix& k_prime, const TargetSpec& spec, MatrixKernelKind kind) {
  if (k.rows() != k.cols() || k_prime.rows() != k_prime.cols()) throw InvalidInput("score: kernels must be square");
  spec.validate(k.rows(), k_prime.rows());
  if (kind == MatrixKernelKind::DotProduct) {
    require_same_dims(k, k_prime, "score (dot product)");
    if (spec.t.size() != spec.t_prime.size()) throw InvalidInput("score (dot product): |t| != |t'|");
  }
}

double trace_of_product(const Matrix& a, const Matrix& b) { return (a * b).trace(); }

void check_indices(std::span<const Index> idx, Index dim, const char* what) {
  std::vector<Index> sorted_idx(idx.begin(), idx.end());
  std::sort(sorted_idx.begin(), sorted_idx.end());
  for (std::size_t i = 0; i < sorted_idx.size(); ++i) {
    if (sorted_idx[i] < 0 || sorted_idx[i] >= dim) {
      throw InvalidInput(std::string(what) + ": index " + std::to_string(sorted_idx[i]) + " out of range [0, " +
                         std::to_string(dim) + ")");
    }
    if (i > 0 && sorted_idx[i] == sorted_idx[i - 1]) {
      throw InvalidInput(std::string(what) + ": duplicate index " + std::to_string(sorted_idx[i]));
    }
  }
}

}  // namespace

void TargetSpec::validate(Index d, Index d_prime) const {
  check_indices(t, d, "target t");
  check_indices(t_prime, d_prime, "target t'");
  if (t.empty() && t_prime.empty()) throw InvalidInput("target: both sides empty");
}

std::vector<Index> complement_of(std::span<const Index> indices, Index d) {
  std::vector<bool> in_target(static_cast<std::size_t>(d), false);
  for (Index i : indices) {
    if (i < 0 || i >= d) throw InvalidInput("complement: index out of range");
    in_target[static_cast<std::size_t>(i)] = true;
  }
  std::vector<Index> out;
  for (Index i = 0; i < d; ++i) {
    if (!in_target[static_cast<std::size_t>(i)]) out.push_back(i);
  }
  return out;
}

Matrix submatrix(const Matrix& k, std::span<const Index> indices) {
  const Index m = static_cast<Index>(indices.size());
  Matrix out(m, m);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j) out(i, j) = k(indices[static_cast<std::size_t>(i)], indices[static_cast<std::size_t>(j)]);
  return out;
}

PartitionedKernel partition(const Matrix& k, std::span<const Index> indices) {
  if (k.rows() != k.cols()) throw InvalidInput("partition: kernel must be square");
  const Index d = k.rows();
  check_indices(indices, d, "partition");

  PartitionedKernel p;
  p.full = k;
  p.target.assign(indices.begin(), indices.end());
  p.complement = complement_of(indices, d);
  const Index nt = static_cast<Index>(p.target.size());
  const Index nc = static_cast<Index>(p.complement.size());
  p.target_block = submatrix(k, p.target);
  p.complement_block = submatrix(k, p.complement);
  p.target_complement.resize(nt, nc);
  for (Index i = 0; i < nt; ++i)
    for (Index j = 0; j < nc; ++j) p.target_complement(i, j) = k(p.target[i], p.complement[j]);
  p.complement_target = p.target_complement.transpose();
  return p;
}

Matrix inv_psd(const Matrix& k, double ridge) {
  if (ridge < 0.0) throw InvalidInput("inv_psd: ridge must be >= 0");
  if (k.size() == 0) return Matrix(0, 0);
  const EigenDecomposition e = sym_eigen(k);
  const double shift = ridge * ridge_scale(k);
  Vector reciprocal(e.dim());
  for (Index i = 0; i < e.dim(); ++i) {
    const double shifted = e.values[i] + shift;
    if (!(shifted > 0.0)) throw InvalidInput("inv_psd: matrix is singular; use a positive ridge");
    reciprocal[i] = 1.0 / shifted;
  }
  Matrix inverse = e.vectors * reciprocal.asDiagonal() * e.vectors.transpose();
  return 0.5 * (inverse + inverse.transpose());
}

double burg_divergence(const Matrix& x, const Matrix& y, double ridge) {
  require_same_dims(x, y, "burg_divergence");
  const Index m = x.rows();
  if (m == 0) throw InvalidInput("burg_divergence: empty matrices");
  const EigenDecomposition ex = sym_eigen(x);
  const EigenDecomposition ey = sym_eigen(y);
  const double shift = ridge * ridge_scale(y);
  double log_det = 0.0;
  for (Index i = 0; i < m; ++i) {
    if (!(ex.values[i] > 0.0)) throw InvalidInput("burg_divergence: x is singular");
    log_det += std::log(ex.values[i]) - std::log(ey.values[i] + shift);
  }
  return dot_product_kernel(x, inv_psd(y, ridge)) - log_det + static_cast<double>(m);
}

double symmetric_burg_divergence(const Matrix& x, const Matrix& y, double ridge) {
  return burg_divergence(x, y, ridge) + burg_divergence(y, x, ridge);
}

double target_score_trace(const Matrix& k, const Matrix& k_prime, const TargetSpec& spec, double ridge) {
  require_same_dims(k, k_prime, "target_score_trace");
  spec.validate(k.rows(), k_prime.rows());
  if (spec.t.empty() || spec.t.size() != spec.t_prime.size()) {
    throw InvalidInput("target_score_trace: requires |t| == |t'| >= 1");
  }
  auto trace_terms = [&](const Matrix& a, const Matrix& b) {
    if (a.size() == 0) return 0.0;
    const Matrix a_inv = inv_psd(a, ridge);
    const Matrix b_inv = inv_psd(b, ridge);
    return trace_of_product(a, b_inv) + trace_of_product(b, a_inv) - trace_of_product(a, a_inv) -
           trace_of_product(b, b_inv);
  };
  const auto c = complement_of(spec.t, k.rows());
  const auto c_prime = complement_of(spec.t_prime, k_prime.rows());
  return trace_terms(k, k_prime) - trace_terms(submatrix(k, c), submatrix(k_prime, c_prime));
}

double target_score_kernelized(const Matrix& k, const Matrix& k_prime, const TargetSpec& spec,
                               MatrixKernelKind kind, double ridge) {
  validate_for_kind(k, k_prime, spec, kind);
  const auto c = complement_of(spec.t, k.rows());
  const auto c_prime = complement_of(spec.t_prime, k_prime.rows());
  const double full = bracket(make_spectrum(k, kind, ridge), make_spectrum(k_prime, kind, ridge), kind);
  if (c.empty() && c_prime.empty()) return full;
  const double rest = bracket(make_spectrum(submatrix(k, c), kind, ridge),
                              make_spectrum(submatrix(k_prime, c_prime), kind, ridge), kind);
  return full - rest;
}

double system_score(const Matrix& k, const Matrix& k_prime, MatrixKernelKind kind, double ridge) {
  std::vector<Index> all(static_cast<std::size_t>(k.rows()));
  std::vector<Index> all_prime(static_cast<std::size_t>(k_prime.rows()));
  for (Index i = 0; i < k.rows(); ++i) all[static_cast<std::size_t>(i)] = i;
  for (Index i = 0; i < k_prime.rows(); ++i) all_prime[static_cast<std::size_t>(i)] = i;
  return target_score_kernelized(k, k_prime, TargetSpec{all, all_prime}, kind, ridge);
}

std::vector<LabeledTarget> singleton_targets(const KernelMatrix& k) {
  std::vector<LabeledTarget> out;
  for (Index i = 0; i < k.dim(); ++i) {
    out.push_back({k.variable_names[static_cast<std::size_t>(i)], TargetSpec::same({i})});
  }
  return out;
}

std::string group_label(std::span<const std::string> names) {
  std::string label;
  for (const auto& name : names) {
    if (!label.empty()) label += '+';
    label += name;
  }
  return label;
}

ScoreReport score_targets(const Matrix& k, const Matrix& k_prime, std::span<const LabeledTarget> targets,
                          MatrixKernelKind kind, double ridge) {
  for (const auto& target : targets) validate_for_kind(k, k_prime, target.spec, kind);
  if (kind == MatrixKernelKind::DotProduct) require_same_dims(k, k_prime, "score (dot product)");

  const Spectrum full = make_spectrum(k, kind, ridge);
  const Spectrum full_prime = make_spectrum(k_prime, kind, ridge);
  ScoreReport report;
  report.system_score = bracket(full, full_prime, kind);
  report.target_scores.resize(targets.size());

  parallel_for(static_cast<long>(targets.size()), [&](long i) {
    const LabeledTarget& target = targets[static_cast<std::size_t>(i)];
    const auto c = complement_of(target.spec.t, k.rows());
    const auto c_prime = complement_of(target.spec.t_prime, k_prime.rows());
    double rest = 0.0;
    if (!c.empty() || !c_prime.empty()) {
      rest = bracket(make_spectrum(submatrix(k, c), kind, ridge),
                     make_spectrum(submatrix(k_prime, c_prime), kind, ridge), kind);
    }
    report.target_scores[static_cast<std::size_t>(i)] = TargetScore{target.label, report.system_score - rest};
  });
  return report;
}

namespace reference {

double target_score_kernelized(const Matrix& k, const Matrix& k_prime, const TargetSpec& spec,
                               MatrixKernelKind kind, double ridge) {
  validate_for_kind(k, k_prime, spec, kind);
  auto literal_bracket = [&](const Matrix& a, const Matrix& b) {
    const Matrix a_inv = inv_psd(a, ridge);
    const Matrix b_inv = inv_psd(b, ridge);
    return matrix_kernel(a, b_inv, kind) + matrix_kernel(b, a_inv, kind) - matrix_kernel(a, a_inv, kind) -
           matrix_kernel(b, b_inv, kind);
  };
  const auto c = complement_of(spec.t, k.rows());
  const auto c_prime = complement_of(spec.t_prime, k_prime.rows());
  const double rest = (c.empty() && c_prime.empty()) ? 0.0
                                                     : literal_bracket(submatrix(k, c), submatrix(k_prime, c_prime));
  return literal_bracket(k, k_prime) - rest;
}

}  // namespace reference

}  // namespace dks
