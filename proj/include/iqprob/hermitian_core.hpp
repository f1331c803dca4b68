#pragma once

// Dense complex Hermitian substrate: validated operator types, spectral
// decomposition, Moore-Penrose pseudo-inverse, PSD ordering and spectral
// projectors. Every other iqprob header builds on this one.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace iqprob {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

enum class ErrorCode {
  NotSquare,
  NonFinite,
  NotHermitian,
  NotIdempotent,
  SpectrumOutOfBand,
  NotPositive,
  TraceNotOne,
  DimensionMismatch,
  ConvergenceFailure,
  BandAmbiguity,
  DecompositionInconsistent,
  LimitNotConverged,
  ConditionOnNullEvent,
  IntervalOutOfRange,
  EmptyCredalSet,
  InvalidDistribution,
  InvalidMeasure,
  ResolutionInvalid,
  MalformedInput,
  InvalidArgument,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotIdempotent: return "NotIdempotent";
    case ErrorCode::SpectrumOutOfBand: return "SpectrumOutOfBand";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::TraceNotOne: return "TraceNotOne";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::BandAmbiguity: return "BandAmbiguity";
    case ErrorCode::DecompositionInconsistent: return "DecompositionInconsistent";
    case ErrorCode::LimitNotConverged: return "LimitNotConverged";
    case ErrorCode::ConditionOnNullEvent: return "ConditionOnNullEvent";
    case ErrorCode::IntervalOutOfRange: return "IntervalOutOfRange";
    case ErrorCode::EmptyCredalSet: return "EmptyCredalSet";
    case ErrorCode::InvalidDistribution: return "InvalidDistribution";
    case ErrorCode::InvalidMeasure: return "InvalidMeasure";
    case ErrorCode::ResolutionInvalid: return "ResolutionInvalid";
    case ErrorCode::MalformedInput: return "MalformedInput";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Exception carrying a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), message_(message) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

/// Tolerance bundle. `rank` left empty means the automatic
/// dim * machine-epsilon * sigma_max threshold.
struct Tolerances {
  double herm = 1e-10;
  double proj = 1e-10;
  double psd = 1e-10;
  double trace = 1e-10;
  double band = 1e-8;
  std::optional<double> rank;

  void validate() const {
    auto positive = [](double v, const char* name) {
      if (!(v > 0.0) || !std::isfinite(v))
        throw Error(ErrorCode::InvalidArgument, std::string("tolerance ") + name + " must be positive");
    };
    positive(herm, "herm");
    positive(proj, "proj");
    positive(psd, "psd");
    positive(trace, "trace");
    positive(band, "band");
    if (rank) positive(*rank, "rank");
  }

  /// Relative rank threshold for a matrix of dimension `dim`.
  double relative_rank(Index dim) const {
    return rank ? *rank : static_cast<double>(dim) * std::numeric_limits<double>::epsilon();
  }
};

// ---------------------------------------------------------------------------
// Norms and small helpers

inline Matrix identity(Index dim) { return Matrix::Identity(dim, dim); }
inline Matrix zeros(Index dim) { return Matrix::Zero(dim, dim); }

inline Matrix adjoint(const Matrix& m) { return m.adjoint(); }

inline Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

/// Spectral (largest singular value) norm.
inline double op_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

inline double frobenius_norm(const Matrix& m) { return m.norm(); }

inline bool all_finite(const Matrix& m) {
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
  return true;
}

inline void require_square_finite(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() < 1)
    throw Error(ErrorCode::NotSquare,
                "expected a non-empty square matrix, got " + std::to_string(m.rows()) + "x" +
                    std::to_string(m.cols()));
  if (!all_finite(m)) throw Error(ErrorCode::NonFinite, "matrix has NaN or infinite entries");
}

inline void require_same_dim(Index a, Index b) {
  if (a != b)
    throw Error(ErrorCode::DimensionMismatch,
                "dimensions " + std::to_string(a) + " and " + std::to_string(b) + " differ");
}

inline double real_trace(const Matrix& m) { return m.trace().real(); }

// ---------------------------------------------------------------------------
// Operator types

/// Hermitian matrix; immutable after construction.
class HermitianOperator {
 public:
  /// Symmetrizes `m` and rejects it if the pre-symmetrization defect exceeds tol.herm.
  static HermitianOperator validate(const Matrix& m, const Tolerances& tol = {}) {
    require_square_finite(m);
    const double defect = op_norm(m - m.adjoint());
    if (defect > tol.herm)
      throw Error(ErrorCode::NotHermitian, "hermiticity defect " + std::to_string(defect));
    return HermitianOperator((m + m.adjoint()) / 2.0, defect);
  }

  /// Hermitian part of an internally computed matrix; no tolerance check.
  static HermitianOperator hermitian_part(const Matrix& m) {
    return HermitianOperator((m + m.adjoint()) / 2.0, op_norm(m - m.adjoint()));
  }

  const Matrix& matrix() const noexcept { return m_; }
  Index dim() const noexcept { return m_.rows(); }
  double hermiticity_defect() const noexcept { return defect_; }

 private:
  HermitianOperator(Matrix m, double defect) : m_(std::move(m)), defect_(defect) {}

  Matrix m_;
  double defect_ = 0.0;
};

struct SpectralDecomposition {
  RealVector values;  // ascending
  Matrix vectors;     // columns, phase-normalized
};

namespace detail {

// Makes the first component of largest modulus of each column real positive.
inline void normalize_phases(Matrix& v) {
  for (Index j = 0; j < v.cols(); ++j) {
    double best = 0.0;
    for (Index i = 0; i < v.rows(); ++i) best = std::max(best, std::abs(v(i, j)));
    if (best == 0.0) continue;
    for (Index i = 0; i < v.rows(); ++i) {
      const double mod = std::abs(v(i, j));
      if (mod >= best * (1.0 - 1e-12)) {
        v.col(j) *= std::conj(v(i, j)) / mod;
        v(i, j) = Complex(v(i, j).real(), 0.0);
        break;
      }
    }
  }
}

inline SpectralDecomposition eigh_matrix(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorCode::ConvergenceFailure, "Hermitian eigensolver did not converge");
  SpectralDecomposition out{solver.eigenvalues(), solver.eigenvectors()};
  if (!out.values.allFinite() || !all_finite(out.vectors))
    throw Error(ErrorCode::ConvergenceFailure, "Hermitian eigensolver produced non-finite output");
  normalize_phases(out.vectors);
  return out;
}

}  // namespace detail

inline SpectralDecomposition eigh(const HermitianOperator& h) { return detail::eigh_matrix(h.matrix()); }

inline RealVector eigenvalues(const HermitianOperator& h) { return eigh(h).values; }

inline double min_eigenvalue(const HermitianOperator& h) { return eigh(h).values.minCoeff(); }

inline double max_eigenvalue(const HermitianOperator& h) { return eigh(h).values.maxCoeff(); }

/// Orthogonal projector, rank = number of unit eigenvalues.
class Projector {
 public:
  static Projector validate(const Matrix& m, const Tolerances& tol = {}) {
    auto h = HermitianOperator::validate(m, tol);
    const Matrix& s = h.matrix();
    const double idem = op_norm(s * s - s);
    if (idem > tol.proj)
      throw Error(ErrorCode::NotIdempotent, "idempotency defect " + std::to_string(idem));
    const auto spec = eigh(h);
    Index rank = 0;
    for (Index i = 0; i < spec.values.size(); ++i) {
      const double l = spec.values(i);
      const double d = std::min(std::abs(l), std::abs(l - 1.0));
      if (d > tol.proj)
        throw Error(ErrorCode::SpectrumOutOfBand, "eigenvalue " + std::to_string(l) + " not near 0 or 1");
      if (std::abs(l - 1.0) < std::abs(l)) ++rank;
    }
    return Projector(std::move(h), rank);
  }

  /// Projector onto the span of orthonormal columns of `basis` (dim rows).
  static Projector from_basis(const Matrix& basis, Index dim) {
    Matrix m = basis.cols() == 0 ? zeros(dim) : Matrix(basis * basis.adjoint());
    return Projector(HermitianOperator::hermitian_part(m), basis.cols());
  }

  /// Wraps an internally computed near-projector; rank counts eigenvalues above 1/2.
  static Projector from_computed(const Matrix& m) {
    auto h = HermitianOperator::hermitian_part(m);
    const auto values = eigh(h).values;
    const Index rank = (values.array() > 0.5).count();
    return Projector(std::move(h), rank);
  }

  static Projector identity(Index dim) { return from_basis(Matrix::Identity(dim, dim), dim); }
  static Projector zero(Index dim) { return from_basis(Matrix(dim, 0), dim); }

  /// I - P.
  Projector complement() const {
    return Projector(HermitianOperator::hermitian_part(iqprob::identity(dim()) - matrix()), dim() - rank_);
  }

  const HermitianOperator& op() const noexcept { return op_; }
  const Matrix& matrix() const noexcept { return op_.matrix(); }
  Index dim() const noexcept { return op_.dim(); }
  Index rank() const noexcept { return rank_; }

 private:
  Projector(HermitianOperator op, Index rank) : op_(std::move(op)), rank_(rank) {}

  HermitianOperator op_;
  Index rank_ = 0;
};

inline Projector validate_projector(const Matrix& m, const Tolerances& tol = {}) {
  return Projector::validate(m, tol);
}

/// Hermitian PSD matrix with unit trace.
class DensityMatrix {
 public:
  static DensityMatrix validate(const Matrix& m, const Tolerances& tol = {}) {
    auto h = HermitianOperator::validate(m, tol);
    const double lo = min_eigenvalue(h);
    if (lo < -tol.psd) throw Error(ErrorCode::NotPositive, "minimum eigenvalue " + std::to_string(lo));
    const double tr = real_trace(h.matrix());
    if (std::abs(tr - 1.0) > tol.trace) throw Error(ErrorCode::TraceNotOne, "trace " + std::to_string(tr));
    return DensityMatrix(std::move(h));
  }

  /// |psi><psi| / <psi|psi>.
  static DensityMatrix pure(const Vector& psi) {
    const double n2 = psi.squaredNorm();
    if (!(n2 > 0.0)) throw Error(ErrorCode::InvalidArgument, "zero state vector");
    return DensityMatrix(HermitianOperator::hermitian_part(psi * psi.adjoint() / n2));
  }

  static DensityMatrix maximally_mixed(Index dim) {
    const Matrix m = iqprob::identity(dim) / static_cast<double>(dim);
    return DensityMatrix(HermitianOperator::hermitian_part(m));
  }

  /// Wraps an internally built state (PSD, unit trace by construction).
  static DensityMatrix from_computed(const Matrix& m) {
    return DensityMatrix(HermitianOperator::hermitian_part(m / m.trace().real()));
  }

  const HermitianOperator& op() const noexcept { return op_; }
  const Matrix& matrix() const noexcept { return op_.matrix(); }
  Index dim() const noexcept { return op_.dim(); }

  /// tr(rho X), real part.
  double expectation(const Matrix& x) const {
    require_same_dim(dim(), x.rows());
    return (op_.matrix() * x).trace().real();
  }

 private:
  explicit DensityMatrix(HermitianOperator op) : op_(std::move(op)) {}

  HermitianOperator op_;
};

// ---------------------------------------------------------------------------
// Pseudo-inverse, ordering, spectral projectors

/// Moore-Penrose inverse of a Hermitian matrix: eigenvalues with
/// |l| <= rank_tol * max|l| map to zero, the rest to 1/l.
inline HermitianOperator pseudo_inverse(const HermitianOperator& h, double rank_tol) {
  const auto spec = eigh(h);
  const double scale = spec.values.cwiseAbs().maxCoeff();
  RealVector inv = RealVector::Zero(spec.values.size());
  if (scale > 0.0)
    for (Index i = 0; i < inv.size(); ++i)
      if (std::abs(spec.values(i)) > rank_tol * scale) inv(i) = 1.0 / spec.values(i);
  const Matrix m = spec.vectors * inv.cast<Complex>().asDiagonal() * spec.vectors.adjoint();
  return HermitianOperator::hermitian_part(m);
}

inline HermitianOperator pseudo_inverse(const HermitianOperator& h, const Tolerances& tol = {}) {
  return pseudo_inverse(h, tol.relative_rank(h.dim()));
}

struct OrderVerdict {
  bool holds = false;
  double min_eigenvalue = 0.0;  // of Y - Z
  explicit operator bool() const noexcept { return holds; }
};

/// Y >= Z up to tol: min eigenvalue of Y - Z is at least -tol.
inline OrderVerdict psd_order(const Matrix& y, const Matrix& z, double tol) {
  require_same_dim(y.rows(), z.rows());
  const double lo = detail::eigh_matrix((y - z + (y - z).adjoint()) / 2.0).values.minCoeff();
  return {lo >= -tol, lo};
}

inline OrderVerdict psd_order(const HermitianOperator& y, const HermitianOperator& z, double tol) {
  return psd_order(y.matrix(), z.matrix(), tol);
}

/// Orthonormal eigenvectors of `h` with |l - target| <= band, as columns.
/// Throws BandAmbiguity when an eigenvalue sits in the guard zone
/// band < |l - target| <= 2 band.
inline Matrix spectral_basis(const HermitianOperator& h, double target, double band) {
  const auto spec = eigh(h);
  std::vector<Index> chosen;
  for (Index i = 0; i < spec.values.size(); ++i) {
    const double d = std::abs(spec.values(i) - target);
    if (d <= band) {
      chosen.push_back(i);
    } else if (d <= 2.0 * band) {
      throw Error(ErrorCode::BandAmbiguity, "eigenvalue " + std::to_string(spec.values(i)) +
                                                " is ambiguously close to the band around " +
                                                std::to_string(target));
    }
  }
  Matrix basis(h.dim(), static_cast<Index>(chosen.size()));
  for (std::size_t k = 0; k < chosen.size(); ++k) basis.col(static_cast<Index>(k)) = spec.vectors.col(chosen[k]);
  return basis;
}

inline Projector spectral_projector(const HermitianOperator& h, double target, double band) {
  return Projector::from_basis(spectral_basis(h, target, band), h.dim());
}

inline bool commutes(const Matrix& a, const Matrix& b, double tol) { return op_norm(commutator(a, b)) <= tol; }

}  // namespace iqprob
