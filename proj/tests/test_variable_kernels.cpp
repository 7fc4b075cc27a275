#include "dks/variable_kernels.hpp"

#include "dks/eigen.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>

using namespace dks;

namespace {

Dataset make(std::vector<std::string> names, std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(names.size()));
  Index i = 0;
  for (const auto& row : rows) {
    Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return Dataset(std::move(names), std::move(m));
}

Dataset random_dataset(Index n, Index d, Rng& rng) {
  Matrix x(n, d);
  std::vector<std::string> names;
  for (Index j = 0; j < d; ++j) {
    names.push_back("v" + std::to_string(j));
    for (Index i = 0; i < n; ++i) x(i, j) = rng.normal() + 0.3 * (j > 0 ? x(i, j - 1) : 0.0);
  }
  return Dataset(names, x);
}

}  // namespace

TEST_CASE("dataset rejects duplicate names and non-finite entries") {
  CHECK_THROWS_AS(make({"a", "a"}, {{1, 2}, {3, 4}}), InvalidInput);
  Matrix bad(2, 1);
  bad << 1.0, std::nan("");
  CHECK_THROWS_AS(Dataset({"a"}, bad), InvalidInput);
  CHECK_THROWS_AS(Dataset({"a", "b"}, Matrix(2, 1)), InvalidInput);
}

TEST_CASE("covariance uses the n-1 denominator") {
  const auto k = covariance_kernel(make({"x", "y"}, {{0, 0}, {1, 1}, {2, 2}}));
  CHECK(k.values(0, 0) == doctest::Approx(1.0));
  CHECK(k.values(0, 1) == doctest::Approx(1.0));
  CHECK(k.values(1, 1) == doctest::Approx(1.0));
  CHECK(k.variable_names == std::vector<std::string>{"x", "y"});

  const auto constant = covariance_kernel(make({"c"}, {{5}, {5}, {5}}));
  CHECK(constant.values(0, 0) == 0.0);
}

TEST_CASE("covariance needs two observations") {
  CHECK_THROWS_AS(covariance_kernel(make({"x"}, {{1}})), InvalidInput);
  CHECK_THROWS_AS(correlation_kernel(make({"x"}, {{1}})), InvalidInput);
  CHECK_THROWS_AS(reference::covariance_kernel(make({"x"}, {{1}})), InvalidInput);
}

TEST_CASE("covariance of independent standard normals approaches identity") {
  Rng rng(7);
  Matrix x(10000, 3);
  for (Index j = 0; j < 3; ++j)
    for (Index i = 0; i < x.rows(); ++i) x(i, j) = rng.normal();
  const auto k = covariance_kernel(Dataset({"a", "b", "c"}, x));
  for (Index i = 0; i < 3; ++i) {
    for (Index j = 0; j < 3; ++j) CHECK(std::abs(k.values(i, j) - (i == j ? 1.0 : 0.0)) < 0.05);
  }
}

TEST_CASE("OpenMP covariance matches the serial reference") {
  Rng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const Dataset ds = random_dataset(40 + trial, 1 + trial * 3, rng);
    const Matrix fast = covariance_kernel(ds).values;
    const Matrix slow = reference::covariance_kernel(ds).values;
    CHECK((fast - slow).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, slow.cwiseAbs().maxCoeff()));
    CHECK(max_asymmetry(fast) == 0.0);
  }
}

TEST_CASE("correlation of perfectly (anti-)correlated variables") {
  const auto same = correlation_kernel(make({"x", "y"}, {{0, 0}, {1, 1}, {2, 2}}));
  CHECK(same.values(0, 1) == doctest::Approx(1.0));
  const auto flipped = correlation_kernel(make({"x", "y"}, {{0, 2}, {1, 1}, {2, 0}}));
  CHECK(flipped.values(0, 0) == 1.0);
  CHECK(flipped.values(1, 1) == 1.0);
  CHECK(flipped.values(0, 1) == doctest::Approx(-1.0));
}

TEST_CASE("constant variable has zero correlation and unit diagonal") {
  const auto k = correlation_kernel(make({"c", "x"}, {{5, 0}, {5, 1}, {5, 2}}));
  CHECK(k.values(0, 0) == 1.0);
  CHECK(k.values(1, 1) == 1.0);
  CHECK(k.values(0, 1) == 0.0);
  CHECK(k.values(1, 0) == 0.0);
}

TEST_CASE("diffusion kernel of uncorrelated variables is the identity") {
  // x and y are exactly uncorrelated: C = I, L = 0.
  const auto k = diffusion_kernel(make({"x", "y"}, {{1, 1}, {-1, 1}, {1, -1}, {-1, -1}}));
  CHECK((k.values - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("diffusion kernel for two variables with correlation 0.5") {
  Matrix c(2, 2);
  c << 1.0, 0.5, 0.5, 1.0;
  const Matrix l = graph_laplacian(c);
  CHECK(l(0, 0) == doctest::Approx(0.5));
  CHECK(l(0, 1) == doctest::Approx(-0.5));
  const Matrix k = sym_matrix_exp(l, -1.0);
  // L has eigenvalues {0, 2|c|} with eigenvectors (1,1)/sqrt2 and (1,-1)/sqrt2.
  const double diag = (1.0 + std::exp(-1.0)) / 2.0;
  const double off = (1.0 - std::exp(-1.0)) / 2.0;
  CHECK(k(0, 0) == doctest::Approx(diag).epsilon(1e-12));
  CHECK(k(0, 1) == doctest::Approx(off).epsilon(1e-12));
  CHECK(diag == doctest::Approx(0.6839).epsilon(1e-4));
  CHECK(off == doctest::Approx(0.3161).epsilon(1e-4));
}

TEST_CASE("diffusion kernel from data matches the closed form for its sample correlation") {
  Rng rng(3);
  const Dataset ds = random_dataset(30, 2, rng);
  const double rho = std::abs(correlation_kernel(ds).values(0, 1));
  const auto k = diffusion_kernel(ds, 1.0);
  CHECK(k.values(0, 0) == doctest::Approx((1.0 + std::exp(-2.0 * rho)) / 2.0).epsilon(1e-12));
  CHECK(k.values(0, 1) == doctest::Approx((1.0 - std::exp(-2.0 * rho)) / 2.0).epsilon(1e-12));
}

TEST_CASE("diffusion kernel tends to identity as lambda -> 0 and rejects lambda <= 0") {
  Rng rng(5);
  const Dataset ds = random_dataset(25, 5, rng);
  const auto k = diffusion_kernel(ds, 1e-10);
  CHECK((k.values - Matrix::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-8);
  CHECK_THROWS_AS(diffusion_kernel(ds, 0.0), InvalidInput);
  CHECK_THROWS_AS(diffusion_kernel(ds, -1.0), InvalidInput);
}

TEST_CASE("diffusion kernel spectrum lies in (0, 1] with top eigenvalue 1") {
  Rng rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const Dataset ds = random_dataset(20, 3 + trial, rng);
    const auto k = diffusion_kernel(ds, 1.0);
    CHECK_NOTHROW(check_kernel(k));
    Eigen::SelfAdjointEigenSolver<Matrix> oracle(k.values);
    CHECK(oracle.eigenvalues().minCoeff() > 0.0);
    CHECK(std::abs(oracle.eigenvalues().maxCoeff() - 1.0) < 1e-8);
  }
}

TEST_CASE("kernels are equivariant under variable reordering") {
  Rng rng(21);
  for (int trial = 0; trial < 5; ++trial) {
    const Dataset ds = random_dataset(30, 6, rng);
    const auto p = testing::random_permutation(6, rng);
    // Column q of the permuted dataset is original column inv[q].
    std::vector<Index> inverse(6);
    for (Index i = 0; i < 6; ++i) inverse[static_cast<std::size_t>(p[static_cast<std::size_t>(i)])] = i;
    const Dataset shuffled = ds.columns(inverse);
    for (auto kind : {VariableKernelKind::Covariance, VariableKernelKind::Correlation, VariableKernelKind::Diffusion}) {
      const Matrix k = variable_kernel(ds, kind).values;
      const Matrix ks = variable_kernel(shuffled, kind).values;
      const double tol = kind == VariableKernelKind::Diffusion ? 1e-12 : 0.0;
      CHECK((testing::permute(k, p) - ks).cwiseAbs().maxCoeff() <= tol);
    }
  }
}
