#include "dks/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <tuple>

namespace dks {
namespace {

constexpr int kMaxSweeps = 100;
constexpr double kSignEps = 1e-12;

double l1_of_rotation(const Vector& a, const Vector& b, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  double sum = 0.0;
  for (Index i = 0; i < a.size(); ++i) sum += std::abs(c * a[i] + s * b[i]);
  return sum;
}

double component_mean(const Vector& v) { return v.size() == 0 ? 0.0 : v.mean(); }

double component_stddev(const Vector& v) {
  if (v.size() == 0) return 0.0;
  const double mu = v.mean();
  return std::sqrt((v.array() - mu).square().mean());
}

// Sorts pairs by descending eigenvalue. Ties keep the solver's order.
EigenDecomposition sorted(const EigenDecomposition& e) {
  const Index d = e.dim();
  std::vector<Index> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return e.values[a] > e.values[b]; });
  EigenDecomposition out{Vector(d), Matrix(d, d)};
  for (Index k = 0; k < d; ++k) {
    out.values[k] = e.values[order[static_cast<std::size_t>(k)]];
    out.vectors.col(k) = e.vectors.col(order[static_cast<std::size_t>(k)]);
  }
  return out;
}

// Stable sort of columns [first, last) by descending L1 norm.
void sort_by_l1(Matrix& vectors, Index first, Index last) {
  auto block = vectors.middleCols(first, last - first);
  const Matrix cols = block;
  std::vector<Index> order(static_cast<std::size_t>(last - first));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return cols.col(a).lpNorm<1>() > cols.col(b).lpNorm<1>(); });
  for (Index k = 0; k < cols.cols(); ++k) block.col(k) = cols.col(order[static_cast<std::size_t>(k)]);
}

// Pairwise L1 maximization inside columns [first, last) of `vectors`.
// Returns whether any rotation was applied.
bool rotate_block(Matrix& vectors, Index first, Index last) {
  bool any = false;
  for (Index i = first; i + 1 < last; ++i) {
    for (int pass = 0; pass < kMaxSweeps; ++pass) {
      bool rotated = false;
      for (Index j = i + 1; j < last; ++j) {
        const Vector a = vectors.col(i);
        const Vector b = vectors.col(j);
        const double angle = detail::best_rotation_angle(a, b);
        const double current = a.lpNorm<1>();
        if (l1_of_rotation(a, b, angle) > current + 1e-12 * (1.0 + current)) {
          const double c = std::cos(angle);
          const double s = std::sin(angle);
          vectors.col(i) = c * a + s * b;
          vectors.col(j) = -s * a + c * b;
          rotated = true;
        }
      }
      if (!rotated) break;
      any = true;
    }
  }
  return any;
}

// Sign convention, then descending component mean, then descending std.
void order_block(Matrix& vectors, Index first, Index last) {
  auto block = vectors.middleCols(first, last - first);
  Matrix cols = block;
  apply_sign_convention(cols);
  std::vector<Index> order(static_cast<std::size_t>(last - first));
  std::iota(order.begin(), order.end(), Index{0});
  std::vector<std::pair<double, double>> keys;
  for (Index k = 0; k < cols.cols(); ++k) keys.emplace_back(component_mean(cols.col(k)), component_stddev(cols.col(k)));
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    const auto& ka = keys[static_cast<std::size_t>(a)];
    const auto& kb = keys[static_cast<std::size_t>(b)];
    return std::tie(ka.first, ka.second) > std::tie(kb.first, kb.second);
  });
  for (Index k = 0; k < cols.cols(); ++k) block.col(k) = cols.col(order[static_cast<std::size_t>(k)]);
}

}  // namespace

Matrix EigenDecomposition::reconstruct() const {
  return vectors * values.asDiagonal() * vectors.transpose();
}

double psd_clamp_tolerance(const Matrix& m) {
  const Index d = m.rows();
  const double mean_diag = d == 0 ? 0.0 : m.trace() / static_cast<double>(d);
  return 1e-8 * std::max(1.0, mean_diag);
}

void apply_sign_convention(Matrix& vectors) {
  for (Index k = 0; k < vectors.cols(); ++k) {
    auto v = vectors.col(k);
    const double sum = v.sum();
    bool flip = false;
    if (std::abs(sum) > kSignEps) {
      flip = sum < 0.0;
    } else {
      for (Index i = 0; i < v.size(); ++i) {
        if (std::abs(v[i]) > kSignEps) {
          flip = v[i] < 0.0;
          break;
        }
      }
    }
    if (flip) v = -v;
  }
}

namespace detail {

EigenDecomposition jacobi(Matrix a) {
  const Index d = a.rows();
  Matrix v = Matrix::Identity(d, d);
  const double target = 1e-12 * a.norm();

  auto off_norm = [&] {
    double s = 0.0;
    for (Index q = 0; q < d; ++q)
      for (Index p = 0; p < q; ++p) s += 2.0 * a(p, q) * a(p, q);
    return std::sqrt(s);
  };

  int sweep = 0;
  for (; sweep <= kMaxSweeps; ++sweep) {
    if (off_norm() <= target) break;
    if (sweep == kMaxSweeps) throw NumericalError("jacobi: no convergence after 100 sweeps");
    for (Index p = 0; p + 1 < d; ++p) {
      for (Index q = p + 1; q < d; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double app = a(p, p);
        const double aqq = a(q, q);
        // Skip entries already negligible against both diagonal entries.
        if (std::abs(apq) < 1e-300 ||
            (sweep > 3 && std::abs(app) + 100.0 * std::abs(apq) == std::abs(app) &&
             std::abs(aqq) + 100.0 * std::abs(apq) == std::abs(aqq))) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        // Column-major: columns p and q are contiguous.
        double* colp = a.col(p).data();
        double* colq = a.col(q).data();
        for (Index k = 0; k < d; ++k) {
          const double akp = colp[k];
          const double akq = colq[k];
          colp[k] = c * akp - s * akq;
          colq[k] = s * akp + c * akq;
        }
        for (Index k = 0; k < d; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0.0;

        double* vp = v.col(p).data();
        double* vq = v.col(q).data();
        for (Index k = 0; k < d; ++k) {
          const double vkp = vp[k];
          const double vkq = vq[k];
          vp[k] = c * vkp - s * vkq;
          vq[k] = s * vkp + c * vkq;
        }
      }
    }
  }
  return EigenDecomposition{a.diagonal(), std::move(v)};
}

double best_rotation_angle(const Vector& a, const Vector& b) {
  constexpr int kGrid = 360;
  const double step = std::numbers::pi / kGrid;
  int best = 0;
  double best_value = l1_of_rotation(a, b, 0.0);
  for (int j = 1; j < kGrid; ++j) {
    const double value = l1_of_rotation(a, b, j * step);
    if (value > best_value) {
      best_value = value;
      best = j;
    }
  }
  // The objective is a sum of |sinusoids|: smooth and concave between kinks,
  // and kinks are local minima, so a bracketed golden-section refines the peak.
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = (best - 1) * step;
  double hi = (best + 1) * step;
  double x1 = hi - phi * (hi - lo);
  double x2 = lo + phi * (hi - lo);
  double f1 = l1_of_rotation(a, b, x1);
  double f2 = l1_of_rotation(a, b, x2);
  for (int it = 0; it < 100 && hi - lo > 1e-13; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = l1_of_rotation(a, b, x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = l1_of_rotation(a, b, x1);
    }
  }
  const double refined = 0.5 * (lo + hi);
  return l1_of_rotation(a, b, refined) > best_value ? refined : best * step;
}

}  // namespace detail

EigenDecomposition sym_eigen(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) throw InvalidInput("sym_eigen: matrix is not square");
  const Index d = m.rows();
  if (d == 0) return EigenDecomposition{Vector(0), Matrix(0, 0)};
  if (!m.allFinite()) throw InvalidInput("sym_eigen: non-finite entry");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > tol * scale) {
    throw InvalidInput("sym_eigen: matrix is not symmetric");
  }

  EigenDecomposition e = sorted(detail::jacobi(0.5 * (m + m.transpose())));
  const double clamp = psd_clamp_tolerance(m);
  for (Index k = 0; k < d; ++k) {
    if (e.values[k] < -clamp) {
      throw NotPsd("sym_eigen: eigenvalue " + std::to_string(e.values[k]) + " below -" + std::to_string(clamp));
    }
    e.values[k] = std::max(0.0, e.values[k]);
  }
  for (Index k = 0; k < d; ++k) e.vectors.col(k).normalize();
  apply_sign_convention(e.vectors);
  return e;
}

EigenDecomposition canonicalize(EigenDecomposition e, double degeneracy_tol) {
  const Index d = e.dim();
  if (d < 2) return e;
  const double gap = degeneracy_tol * std::max(1.0, e.values.maxCoeff());

  Index first = 0;
  while (first < d) {
    Index last = first + 1;
    while (last < d && std::abs(e.values[last - 1] - e.values[last]) <= gap) ++last;
    if (last - first > 1) {
      // The greedy pass runs in descending-L1 order and is repeated until it
      // applies no rotation, so a second canonicalize finds nothing to do.
      for (int round = 0; round < kMaxSweeps; ++round) {
        sort_by_l1(e.vectors, first, last);
        if (!rotate_block(e.vectors, first, last)) break;
      }
      order_block(e.vectors, first, last);
    }
    first = last;
  }
  return e;
}

EigenDecomposition canonical_eigen(const Matrix& m) { return canonicalize(sym_eigen(m)); }

Matrix sym_matrix_exp(const Matrix& m, double scale) {
  if (m.rows() != m.cols()) throw InvalidInput("sym_matrix_exp: matrix is not square");
  const Index d = m.rows();
  if (d == 0) return Matrix(0, 0);
  const double sym_scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol * sym_scale) {
    throw InvalidInput("sym_matrix_exp: matrix is not symmetric");
  }
  const EigenDecomposition e = detail::jacobi(0.5 * (m + m.transpose()));
  const Vector ex = (scale * e.values).array().exp();
  Matrix out = e.vectors * ex.asDiagonal() * e.vectors.transpose();
  return 0.5 * (out + out.transpose());
}

}  // namespace dks
