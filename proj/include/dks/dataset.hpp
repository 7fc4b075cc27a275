#pragma once

#include "dks/types.hpp"

#include <span>
#include <string>
#include <vector>

namespace dks {

/// Named multivariate sample: rows are observations, columns are variables.
/// Names are unique and every entry is finite; the observation count is checked
/// by the operations that need it, not here.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::vector<std::string> variable_names, Matrix data);

  const std::vector<std::string>& variable_names() const noexcept { return names_; }
  const Matrix& data() const noexcept { return data_; }
  Index n_observations() const noexcept { return data_.rows(); }
  Index n_variables() const noexcept { return data_.cols(); }

  /// Contiguous block of `count` observations starting at row `first`.
  Dataset rows(Index first, Index count) const;
  /// Variables in the given order.
  Dataset columns(std::span<const Index> indices) const;

 private:
  std::vector<std::string> names_;
  Matrix data_;
};

/// Symmetric PSD kernel between variables, with the variable names attached.
struct KernelMatrix {
  std::vector<std::string> variable_names;
  Matrix values;

  Index dim() const noexcept { return values.rows(); }
};

/// Largest |a_ij - a_ji|.
double max_asymmetry(const Matrix& m);

/// Throws InvalidInput / NotPsd if `k` breaks the kernel invariants
/// (symmetric within 1e-12, min eigenvalue >= -1e-8 * max(1, trace/d)).
void check_kernel(const KernelMatrix& k);

}  // namespace dks
