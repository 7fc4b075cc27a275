#include "dks/dataset.hpp"

#include "dks/eigen.hpp"

#include <cmath>
#include <unordered_set>

namespace dks {

Dataset::Dataset(std::vector<std::string> variable_names, Matrix data)
    : names_(std::move(variable_names)), data_(std::move(data)) {
  if (static_cast<Index>(names_.size()) != data_.cols()) {
    throw InvalidInput("dataset: " + std::to_string(names_.size()) + " names for " +
                       std::to_string(data_.cols()) + " columns");
  }
  std::unordered_set<std::string> seen;
  for (const auto& name : names_) {
    if (!seen.insert(name).second) throw InvalidInput("dataset: duplicate variable name '" + name + "'");
  }
  if (!data_.allFinite()) throw InvalidInput("dataset: non-finite entry");
}

Dataset Dataset::rows(Index first, Index count) const {
  if (first < 0 || count < 0 || first + count > data_.rows()) {
    throw InvalidInput("dataset: row range out of bounds");
  }
  return Dataset(names_, data_.middleRows(first, count));
}

Dataset Dataset::columns(std::span<const Index> indices) const {
  std::vector<std::string> names;
  Matrix out(data_.rows(), static_cast<Index>(indices.size()));
  for (std::size_t j = 0; j < indices.size(); ++j) {
    const Index c = indices[j];
    if (c < 0 || c >= data_.cols()) throw InvalidInput("dataset: column index out of range");
    names.push_back(names_[static_cast<std::size_t>(c)]);
    out.col(static_cast<Index>(j)) = data_.col(c);
  }
  return Dataset(std::move(names), std::move(out));
}

double max_asymmetry(const Matrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return m.rows() == 0 ? 0.0 : (m - m.transpose()).cwiseAbs().maxCoeff();
}

void check_kernel(const KernelMatrix& k) {
  if (static_cast<Index>(k.variable_names.size()) != k.dim()) {
    throw InvalidInput("kernel: name count does not match dimension");
  }
  if (max_asymmetry(k.values) > 1e-12) throw InvalidInput("kernel: not symmetric");
  sym_eigen(k.values);  // throws NotPsd
}

}  // namespace dks
