#pragma once

// Seeded generators for property suites.
//
// Reproducibility recipe: std::mt19937_64(seed); uniform u = (x >> 11) * 2^-53;
// standard normals by Box-Muller on (1 - u1, u2); a complex normal takes
// two consecutive normals (re, im) scaled by 1/sqrt(2). Haar unitaries come
// from the QR of an n x n complex Ginibre matrix (row-major fill) with the
// diagonal phases of R divided out. A random projector of rank r is
// U diag(1..1, 0..0) U^dagger with U Haar.

#include "iqprob/hermitian_core.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace iqprob {

class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [lo, hi].
  Index uniform_int(Index lo, Index hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<Index>(engine_() % span);
  }

  double normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  Complex complex_normal() {
    const double re = normal();
    const double im = normal();
    return Complex(re, im) / std::sqrt(2.0);
  }

  double exponential() { return -std::log(1.0 - uniform()); }

 private:
  std::mt19937_64 engine_;
};

inline Matrix ginibre(Index rows, Index cols, Rng& rng) {
  Matrix g(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) g(i, j) = rng.complex_normal();
  return g;
}

inline Matrix haar_unitary(Index dim, Rng& rng) {
  const Matrix z = ginibre(dim, dim, rng);
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ() * Matrix::Identity(dim, dim);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < dim; ++j) {
    const double mod = std::abs(r(j, j));
    if (mod > 0.0) q.col(j) *= r(j, j) / mod;
  }
  return q;
}

inline Projector random_projector(Index dim, Index rank, Rng& rng) {
  const Matrix u = haar_unitary(dim, rng);
  return Projector::from_basis(u.leftCols(rank), dim);
}

/// Rank drawn uniformly from [0, dim].
inline Projector random_projector(Index dim, Rng& rng) {
  const Index rank = rng.uniform_int(0, dim);
  return random_projector(dim, rank, rng);
}

inline Vector random_state_vector(Index dim, Rng& rng) {
  Vector v = ginibre(dim, 1, rng).col(0);
  return v / v.norm();
}

/// Hilbert-Schmidt random mixed state G G^dagger / tr.
inline DensityMatrix random_density_matrix(Index dim, Rng& rng) {
  const Matrix g = ginibre(dim, dim, rng);
  return DensityMatrix::from_computed(g * g.adjoint());
}

inline HermitianOperator random_hermitian(Index dim, Rng& rng) {
  const Matrix g = ginibre(dim, dim, rng);
  return HermitianOperator::hermitian_part(g + g.adjoint());
}

/// Flat Dirichlet weights of length n.
inline std::vector<double> dirichlet_weights(std::size_t n, Rng& rng) {
  std::vector<double> w(n);
  double total = 0.0;
  for (auto& x : w) total += (x = rng.exponential());
  for (auto& x : w) x /= total;
  return w;
}

/// Random state commuting with `p`: diagonal in an eigenbasis of p, with the
/// basis rotated by independent Haar unitaries inside ran(p) and ker(p).
inline DensityMatrix random_commuting_state(const Projector& p, Rng& rng) {
  const Index n = p.dim();
  const auto spec = eigh(p.op());
  const Index r = (spec.values.array() > 0.5).count();
  Matrix basis(n, n);
  const Matrix lower = spec.vectors.leftCols(n - r);
  const Matrix upper = spec.vectors.rightCols(r);
  basis.leftCols(n - r) = n - r > 0 ? Matrix(lower * haar_unitary(n - r, rng)) : lower;
  basis.rightCols(r) = r > 0 ? Matrix(upper * haar_unitary(r, rng)) : upper;
  const auto w = dirichlet_weights(static_cast<std::size_t>(n), rng);
  RealVector d(n);
  for (Index i = 0; i < n; ++i) d(i) = w[static_cast<std::size_t>(i)];
  return DensityMatrix::from_computed(basis * d.cast<Complex>().asDiagonal() * basis.adjoint());
}

}  // namespace iqprob
