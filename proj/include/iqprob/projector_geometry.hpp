#pragma once

// Geometry of a pair of projectors: the five-block CS decomposition,
// intersection / range-sum projectors, principal angles, and the pairing
// between the spectra of p - q and pq.

#include "iqprob/hermitian_core.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string_view>
#include <vector>

namespace iqprob {

/// Canonical block form of (p, q).
///
/// In the basis given by the columns of `unitary`, ordered as
/// H' (2m) + H11 + H10 + H01 + H00, the pair reads
///
///   P = [[C^2, CS], [CS, S^2]] + I + I + 0 + 0
///   Q = [[I,   0 ], [0,  0  ]] + I + 0 + I + 0
///
/// where H_ab holds common eigenvectors with p = a and q = b. C and S are
/// diagonal with entries cos(theta_j), sin(theta_j), theta_j ascending.
struct TwoProjectorDecomposition {
  Matrix unitary;
  Index m = 0;
  Index m11 = 0;
  Index m10 = 0;
  Index m01 = 0;
  Index m00 = 0;
  Matrix cos_block;  // C, m x m
  Matrix sin_block;  // S, m x m
  Projector pi11;
  Projector pi10;
  Projector pi01;
  Projector pi00;
  std::vector<double> principal_angles;

  Index dim() const noexcept { return unitary.rows(); }

  Matrix canonical_p() const {
    Matrix out = zeros(dim());
    if (m > 0) {
      out.block(0, 0, m, m) = cos_block * cos_block;
      out.block(0, m, m, m) = cos_block * sin_block;
      out.block(m, 0, m, m) = cos_block * sin_block;
      out.block(m, m, m, m) = sin_block * sin_block;
    }
    const Index off = 2 * m;
    for (Index i = 0; i < m11 + m10; ++i) out(off + i, off + i) = 1.0;
    return out;
  }

  Matrix canonical_q() const {
    Matrix out = zeros(dim());
    for (Index i = 0; i < m; ++i) out(i, i) = 1.0;
    const Index off = 2 * m;
    for (Index i = 0; i < m11; ++i) out(off + i, off + i) = 1.0;
    for (Index i = 0; i < m01; ++i) out(off + m11 + m10 + i, off + m11 + m10 + i) = 1.0;
    return out;
  }

  /// Lifts X = f(C) on H' (acting as diag(X, X)) to the original basis,
  /// with `rest` on the common-eigenvector blocks.
  Matrix lift_generic(const Matrix& x, const Matrix& rest) const {
    Matrix canon = zeros(dim());
    if (m > 0) {
      canon.block(0, 0, m, m) = x;
      canon.block(m, m, m, m) = x;
    }
    const Index k = dim() - 2 * m;
    if (k > 0) canon.block(2 * m, 2 * m, k, k) = rest;
    return unitary * canon * unitary.adjoint();
  }
};

enum class IntersectionMethod { Spectral, HarmonicMean, IteratedLimit, SchurBlock };

constexpr std::string_view to_string(IntersectionMethod m) {
  switch (m) {
    case IntersectionMethod::Spectral: return "spectral";
    case IntersectionMethod::HarmonicMean: return "harmonic-mean";
    case IntersectionMethod::IteratedLimit: return "iterated-limit";
    case IntersectionMethod::SchurBlock: return "schur-block";
  }
  return "unknown";
}

inline IntersectionMethod parse_intersection_method(std::string_view s) {
  for (auto m : {IntersectionMethod::Spectral, IntersectionMethod::HarmonicMean, IntersectionMethod::IteratedLimit,
                 IntersectionMethod::SchurBlock})
    if (s == to_string(m)) return m;
  throw Error(ErrorCode::InvalidArgument, "unknown intersection method '" + std::string(s) + "'");
}

/// Controls for the q (pq)^n limit. With `squaring` the iterate index doubles
/// each step (X_{2n} from (pq)^{2n} = ((pq)^n)^2); otherwise one factor pq per step.
struct LimitOptions {
  std::size_t max_iterations = 100000;
  double tolerance = 1e-12;  // Frobenius norm of successive difference
  double stall_tolerance = 1e-8;
  bool squaring = true;
};

namespace detail {

inline Matrix columns_where(const SpectralDecomposition& s, bool upper_half) {
  std::vector<Index> idx;
  for (Index i = 0; i < s.values.size(); ++i)
    if ((s.values(i) > 0.5) == upper_half) idx.push_back(i);
  Matrix out(s.vectors.rows(), static_cast<Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) out.col(static_cast<Index>(k)) = s.vectors.col(idx[k]);
  return out;
}

inline Matrix hstack(std::initializer_list<const Matrix*> parts, Index rows) {
  Index cols = 0;
  for (auto* p : parts) cols += p->cols();
  Matrix out(rows, cols);
  Index at = 0;
  for (auto* p : parts) {
    if (p->cols() > 0) out.middleCols(at, p->cols()) = *p;
    at += p->cols();
  }
  return out;
}

}  // namespace detail

inline TwoProjectorDecomposition cs_decompose(const Projector& p, const Projector& q, const Tolerances& tol = {}) {
  require_same_dim(p.dim(), q.dim());
  const Index n = p.dim();
  const auto sum = HermitianOperator::hermitian_part(p.matrix() + q.matrix());
  const auto diff = HermitianOperator::hermitian_part(p.matrix() - q.matrix());

  const Matrix b11 = spectral_basis(sum, 2.0, tol.band);
  const Matrix b00 = spectral_basis(sum, 0.0, tol.band);
  const Matrix b10 = spectral_basis(diff, 1.0, tol.band);
  const Matrix b01 = spectral_basis(diff, -1.0, tol.band);

  const Matrix common = detail::hstack({&b11, &b10, &b01, &b00}, n);
  const Matrix rest = identity(n) - common * common.adjoint();
  const Matrix w = detail::columns_where(detail::eigh_matrix((rest + rest.adjoint()) / 2.0), true);
  if (w.cols() + common.cols() != n || w.cols() % 2 != 0)
    throw Error(ErrorCode::DecompositionInconsistent,
                "generic block has dimension " + std::to_string(w.cols()) + " alongside " +
                    std::to_string(common.cols()) + " common eigenvectors");
  const Index m = w.cols() / 2;

  Matrix top(n, m), bottom(n, m);
  RealVector cos2 = RealVector::Zero(m);
  if (m > 0) {
    const Matrix qg = w.adjoint() * q.matrix() * w;
    const Matrix pg = w.adjoint() * p.matrix() * w;
    const auto qspec = detail::eigh_matrix((qg + qg.adjoint()) / 2.0);
    const Matrix a = detail::columns_where(qspec, true);
    const Matrix k0 = detail::columns_where(qspec, false);
    if (a.cols() != m || k0.cols() != m)
      throw Error(ErrorCode::DecompositionInconsistent, "q does not split the generic block evenly");

    // Off-diagonal block of p in the (ran q', ker q') frame and its polar form B = V Bhat.
    const Matrix b = a.adjoint() * pg * k0;
    const auto gram = detail::eigh_matrix((b.adjoint() * b + (b.adjoint() * b).adjoint()) / 2.0);
    if (gram.values.minCoeff() <= 0.0)
      throw Error(ErrorCode::DecompositionInconsistent, "off-diagonal block of p is singular");
    const RealVector inv_sqrt = gram.values.cwiseSqrt().cwiseInverse();
    const Matrix v = b * gram.vectors * inv_sqrt.cast<Complex>().asDiagonal() * gram.vectors.adjoint();

    const Matrix k = v.adjoint() * (a.adjoint() * pg * a) * v;
    const auto kspec = detail::eigh_matrix((k + k.adjoint()) / 2.0);
    // Descending cos^2, i.e. ascending angle.
    Matrix y(m, m);
    for (Index j = 0; j < m; ++j) {
      y.col(j) = kspec.vectors.col(m - 1 - j);
      cos2(j) = std::clamp(kspec.values(m - 1 - j), 0.0, 1.0);
    }
    top = w * a * v * y;
    bottom = w * k0 * y;
  }

  TwoProjectorDecomposition d{
      .unitary = detail::hstack({&top, &bottom, &b11, &b10, &b01, &b00}, n),
      .m = m,
      .m11 = b11.cols(),
      .m10 = b10.cols(),
      .m01 = b01.cols(),
      .m00 = b00.cols(),
      .cos_block = Matrix::Zero(m, m),
      .sin_block = Matrix::Zero(m, m),
      .pi11 = Projector::from_basis(b11, n),
      .pi10 = Projector::from_basis(b10, n),
      .pi01 = Projector::from_basis(b01, n),
      .pi00 = Projector::from_basis(b00, n),
      .principal_angles = {},
  };
  for (Index j = 0; j < m; ++j) {
    const double c = std::sqrt(cos2(j));
    const double s = std::sqrt(1.0 - cos2(j));
    d.cos_block(j, j) = c;
    d.sin_block(j, j) = s;
    d.principal_angles.push_back(std::atan2(s, c));
  }

  const Matrix& u = d.unitary;
  const double err_p = op_norm(u * d.canonical_p() * u.adjoint() - p.matrix());
  const double err_q = op_norm(u * d.canonical_q() * u.adjoint() - q.matrix());
  if (err_p > 1e-8 || err_q > 1e-8)
    throw Error(ErrorCode::DecompositionInconsistent,
                "reconstruction errors " + std::to_string(err_p) + ", " + std::to_string(err_q));
  return d;
}

/// Projector onto ran(p) + ran(q), computed as (p+q)(p+q)^-.
inline Projector span_sum_projector(const Projector& p, const Projector& q, const Tolerances& tol = {}) {
  require_same_dim(p.dim(), q.dim());
  const auto sum = HermitianOperator::hermitian_part(p.matrix() + q.matrix());
  const auto inv = pseudo_inverse(sum, tol.band);
  return Projector::from_computed(sum.matrix() * inv.matrix());
}

namespace detail {

inline Matrix intersection_harmonic_mean(const Projector& p, const Projector& q, const Tolerances& tol) {
  const auto sum = HermitianOperator::hermitian_part(p.matrix() + q.matrix());
  const auto inv = pseudo_inverse(sum, tol.band);
  return 2.0 * p.matrix() * inv.matrix() * q.matrix();
}

inline Matrix intersection_limit(const Projector& p, const Projector& q, const LimitOptions& opts) {
  const Matrix& pm = p.matrix();
  const Matrix& qm = q.matrix();
  Matrix x = qm;
  Matrix t = pm * qm;
  if (opts.squaring) x = qm * t;
  double previous = std::numeric_limits<double>::infinity();
  for (std::size_t it = 0; it < opts.max_iterations; ++it) {
    Matrix next;
    if (opts.squaring) {
      t = t * t;
      next = qm * t;
    } else {
      next = x * t;
    }
    if (!all_finite(next)) break;
    const double step = (next - x).norm();
    // After settling, squaring amplifies rounding in eigenvalues equal to 1.
    if (opts.squaring && step > previous && previous < opts.stall_tolerance) return x;
    x = std::move(next);
    if (step < opts.tolerance) return x;
    previous = step;
  }
  throw Error(ErrorCode::LimitNotConverged,
              "q(pq)^n did not settle within " + std::to_string(opts.max_iterations) + " iterations");
}

inline Matrix intersection_schur(const Projector& p, const Projector& q, const Tolerances& tol) {
  const Index n = p.dim();
  const auto qspec = eigh(q.op());
  const Matrix ones = columns_where(qspec, true);
  const Matrix nulls = columns_where(qspec, false);
  const Index n1 = ones.cols();
  const Index n2 = nulls.cols();
  if (n1 == 0) return zeros(n);
  if (n2 == 0) return p.matrix();
  const Matrix basis = hstack({&ones, &nulls}, n);
  const Matrix rot = basis.adjoint() * p.matrix() * basis;
  const Matrix p11 = rot.topLeftCorner(n1, n1);
  const Matrix p12 = rot.topRightCorner(n1, n2);
  const Matrix p21 = rot.bottomLeftCorner(n2, n1);
  const auto p22 = HermitianOperator::hermitian_part(rot.bottomRightCorner(n2, n2));
  // Rank cut relative to |p| = 1, not to the block.
  const double block_scale = eigh(p22).values.cwiseAbs().maxCoeff();
  const double cut = block_scale > 0.0 ? tol.relative_rank(n) / block_scale : 1.0;
  const Matrix schur = p11 - p12 * pseudo_inverse(p22, cut).matrix() * p21;
  return ones * schur * ones.adjoint();
}

}  // namespace detail

/// Projector onto ran(p) ∩ ran(q).
inline Projector intersection_projector(const Projector& p, const Projector& q,
                                        IntersectionMethod method = IntersectionMethod::Spectral,
                                        const Tolerances& tol = {}, const LimitOptions& limit = {}) {
  require_same_dim(p.dim(), q.dim());
  switch (method) {
    case IntersectionMethod::Spectral:
      return spectral_projector(HermitianOperator::hermitian_part(p.matrix() + q.matrix()), 2.0, tol.band);
    case IntersectionMethod::HarmonicMean:
      return Projector::from_computed(detail::intersection_harmonic_mean(p, q, tol));
    case IntersectionMethod::IteratedLimit:
      return Projector::from_computed(detail::intersection_limit(p, q, limit));
    case IntersectionMethod::SchurBlock:
      return Projector::from_computed(detail::intersection_schur(p, q, tol));
  }
  throw Error(ErrorCode::InvalidArgument, "unknown intersection method");
}

inline std::vector<double> principal_angles(const Projector& p, const Projector& q, const Tolerances& tol = {}) {
  return cs_decompose(p, q, tol).principal_angles;
}

struct EigenPairing {
  double lambda = 0.0;          // eigenvalue of p - q, 0 < |lambda| < 1
  double paired = 0.0;          // 1 - lambda^2, eigenvalue of pq on p x
  double residual_p = 0.0;      // |pq(px) - (1-l^2) px|
  double residual_q = 0.0;      // |qp(qx) - (1-l^2) qx|
  double mirror_mismatch = 0.0; // distance from -lambda to the nearest eigenvalue
};

struct PairingReport {
  std::vector<EigenPairing> pairs;
  double max_residual = 0.0;
  double max_mirror_mismatch = 0.0;
};

/// Eigenvectors x of p - q with eigenvalue strictly inside (0, 1) in modulus
/// map to eigenvectors px of pq with eigenvalue 1 - lambda^2.
inline PairingReport difference_spectrum_pairing(const Projector& p, const Projector& q,
                                                 const Tolerances& tol = {}) {
  require_same_dim(p.dim(), q.dim());
  const Matrix& pm = p.matrix();
  const Matrix& qm = q.matrix();
  const auto spec = eigh(HermitianOperator::hermitian_part(pm - qm));
  PairingReport out;
  for (Index i = 0; i < spec.values.size(); ++i) {
    const double l = spec.values(i);
    if (std::abs(l) <= tol.band || std::abs(l) >= 1.0 - tol.band) continue;
    const Vector x = spec.vectors.col(i);
    const Vector px = pm * x;
    const Vector qx = qm * x;
    EigenPairing e;
    e.lambda = l;
    e.paired = 1.0 - l * l;
    e.residual_p = (pm * (qm * px) - e.paired * px).norm();
    e.residual_q = (qm * (pm * qx) - e.paired * qx).norm();
    e.mirror_mismatch = (spec.values.array() + l).abs().minCoeff();
    out.max_residual = std::max({out.max_residual, e.residual_p, e.residual_q});
    out.max_mirror_mismatch = std::max(out.max_mirror_mismatch, e.mirror_mismatch);
    out.pairs.push_back(e);
  }
  return out;
}

}  // namespace iqprob
