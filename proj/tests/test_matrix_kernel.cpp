#include "dks/matrix_kernel.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <cmath>

using namespace dks;

namespace {

Matrix diag(std::initializer_list<double> values) {
  Vector v(static_cast<Index>(values.size()));
  Index i = 0;
  for (double x : values) v[i++] = x;
  return v.asDiagonal();
}

double mk(const Matrix& a, const Matrix& b) { return matrix_kernel(a, b, MatrixKernelKind::GaussianMatrixKernel); }

}  // namespace

TEST_CASE("eigen features of small matrices") {
  const auto f = eigen_features(canonical_eigen(diag({2, 1})));
  REQUIRE(f.size() == 2);
  CHECK(f[0].eigenvalue == doctest::Approx(2.0));
  CHECK(f[0].mu == doctest::Approx(0.5));
  CHECK(f[0].sigma == doctest::Approx(0.5));
  CHECK(f[1].eigenvalue == doctest::Approx(1.0));

  const auto one = eigen_features(canonical_eigen(Matrix::Constant(1, 1, 3.0)));
  REQUIRE(one.size() == 1);
  CHECK(one[0].mu == 1.0);
  CHECK(one[0].sigma == kSigmaFloor);
}

TEST_CASE("vector kernel examples") {
  CHECK(vector_kernel({1.0, 0.0, 1.0}, {1.0, 1.0, 1.0}) == doctest::Approx(std::exp(-1.0 / 8.0)));
  CHECK(vector_kernel({1.0, 0.0, 1.0}, {1.0, 1.0, 1.0}) == doctest::Approx(0.88250).epsilon(1e-5));
  CHECK(vector_kernel({1.0, 0.0, 1.0}, {1.0, 0.0, 2.0}) == doctest::Approx(std::sqrt(0.8)));
  CHECK(vector_kernel({1.0, 0.0, 1.0}, {1.0, 0.0, 2.0}) == doctest::Approx(0.89443).epsilon(1e-5));
  CHECK(vector_kernel({1.0, 0.3, 0.7}, {2.0, 0.3, 0.7}) == doctest::Approx(1.0));
  const EigenFeature a{1.0, 0.1, 0.4}, b{1.0, -0.2, 0.9};
  CHECK(vector_kernel_squared(a, b) == doctest::Approx(vector_kernel(a, b) * vector_kernel(a, b)).epsilon(1e-14));
  CHECK(vector_kernel(a, b) == doctest::Approx(vector_kernel(b, a)).epsilon(1e-15));
}

TEST_CASE("1x1 matrices reduce to the scalar product") {
  for (double a : {0.0, 0.5, 2.0})
    for (double b : {0.1, 3.0}) CHECK(mk(Matrix::Constant(1, 1, a), Matrix::Constant(1, 1, b)) == doctest::Approx(a * b));
}

TEST_CASE("empty inputs give zero") {
  CHECK(mk(Matrix(0, 0), diag({1, 2})) == 0.0);
  CHECK(mk(diag({1, 2}), Matrix(0, 0)) == 0.0);
  CHECK(mk(Matrix(0, 0), Matrix(0, 0)) == 0.0);
}

TEST_CASE("dot product kernel") {
  CHECK(matrix_kernel(Matrix::Identity(2, 2), Matrix::Identity(2, 2), MatrixKernelKind::DotProduct) == 2.0);
  Rng rng(11);
  const Matrix a = random_spd(5, rng), b = random_spd(5, rng);
  CHECK(dot_product_kernel(a, b) == doctest::Approx(a.cwiseProduct(b).sum()).epsilon(1e-14));
  CHECK(dot_product_kernel(a, b) == doctest::Approx((a * b).trace()).epsilon(1e-12));
  CHECK_THROWS_AS(matrix_kernel(a, Matrix::Identity(4, 4), MatrixKernelKind::DotProduct), InvalidInput);
}

TEST_CASE("gaussian kernel on identities of different size") {
  // I_1 vs I_2: canonical I_2 basis is (1,1)/sqrt2, (1,-1)/sqrt2.
  const double r = 1.0 / std::sqrt(2.0);
  const EigenFeature one{1.0, 1.0, kSigmaFloor};
  const EigenFeature p{1.0, r, kSigmaFloor}, m{1.0, 0.0, r};
  const double expected = vector_kernel_squared(one, p) + vector_kernel_squared(one, m);
  CHECK(mk(Matrix::Identity(1, 1), Matrix::Identity(2, 2)) == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("gaussian kernel is symmetric") {
  Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix a = random_spd(1 + trial % 6, rng);
    const Matrix b = random_spd(1 + (trial / 6) % 6, rng);
    CHECK(testing::relative_error(mk(a, b), mk(b, a)) <= 1e-12);
  }
}

TEST_CASE("gaussian kernel is permutation invariant") {
  Rng rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    const Index d = 2 + trial % 6;
    const Matrix a = testing::random_nondegenerate_psd(d, rng);
    const Matrix b = random_spd(3, rng);
    const auto p = testing::random_permutation(d, rng);
    CHECK(testing::relative_error(mk(a, b), mk(testing::permute(a, p), b)) <= 1e-10);
  }
}

TEST_CASE("gaussian kernel is bilinear in positive scalings") {
  Rng rng(14);
  const Matrix a = random_spd(4, rng), b = random_spd(6, rng);
  CHECK(testing::relative_error(mk(2.5 * a, 0.3 * b), 0.75 * mk(a, b)) <= 1e-10);
}

TEST_CASE("gram matrix over a PSD collection is PSD") {
  Rng rng(15);
  std::vector<Matrix> ms;
  for (int i = 0; i < 12; ++i) ms.push_back(random_spd(2 + i % 5, rng));
  Matrix gram(12, 12);
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 12; ++j) gram(i, j) = mk(ms[i], ms[j]);
  gram = 0.5 * (gram + gram.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(gram);
  CHECK(solver.eigenvalues().minCoeff() >= -1e-10 * solver.eigenvalues().maxCoeff());
}

TEST_CASE("parallel feature kernel equals the serial reference") {
  Rng rng(16);
  for (int trial = 0; trial < 10; ++trial) {
    const auto fa = eigen_features(canonical_eigen(random_spd(10 + trial, rng)));
    const auto fb = eigen_features(canonical_eigen(random_spd(7 + trial, rng)));
    CHECK(testing::relative_error(matrix_kernel(fa, fb), reference::matrix_kernel(fa, fb)) <= 1e-12);
  }
}
