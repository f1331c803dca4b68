#pragma once

// No-go certificate for additive joint probabilities of two projective
// measurements, and two-time (sequential) measurement probabilities.

#include "iqprob/hermitian_core.hpp"
#include "iqprob/imprecise_probability.hpp"
#include "iqprob/projector_geometry.hpp"
#include "iqprob/random.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace iqprob {

/// Complete family of mutually orthogonal projectors.
class ProjectiveResolution {
 public:
  static constexpr double strict = 1e-10;
  static constexpr double near = 1e-6;

  static ProjectiveResolution validate(const std::vector<Matrix>& ms, const Tolerances& tol = {}) {
    if (ms.empty()) throw Error(ErrorCode::ResolutionInvalid, "resolution has no projectors");
    std::vector<Projector> ps;
    ps.reserve(ms.size());
    for (std::size_t k = 0; k < ms.size(); ++k) {
      try {
        ps.push_back(Projector::validate(ms[k], tol));
      } catch (const Error& e) {
        throw Error(ErrorCode::ResolutionInvalid, "projector " + std::to_string(k) + ": " + e.what());
      }
    }
    return ProjectiveResolution(std::move(ps));
  }

  explicit ProjectiveResolution(std::vector<Projector> ps) : ps_(std::move(ps)) {
    if (ps_.empty()) throw Error(ErrorCode::ResolutionInvalid, "resolution has no projectors");
    const Index n = ps_.front().dim();
    Matrix sum = zeros(n);
    double ortho = 0.0;
    for (std::size_t k = 0; k < ps_.size(); ++k) {
      if (ps_[k].dim() != n) throw Error(ErrorCode::ResolutionInvalid, "projectors differ in dimension");
      sum += ps_[k].matrix();
      for (std::size_t j = k + 1; j < ps_.size(); ++j)
        ortho = std::max(ortho, op_norm(ps_[k].matrix() * ps_[j].matrix()));
    }
    const double completeness = op_norm(sum - identity(n));
    const double defect = std::max(completeness, ortho);
    if (defect > strict) {
      const std::string detail = "completeness defect " + std::to_string(completeness) +
                                 ", orthogonality defect " + std::to_string(ortho);
      if (defect <= near)
        throw Error(ErrorCode::ResolutionInvalid, "near-resolution rejected (not renormalized): " + detail);
      throw Error(ErrorCode::ResolutionInvalid, "not a resolution of the identity: " + detail);
    }
  }

  const std::vector<Projector>& projectors() const noexcept { return ps_; }
  std::size_t size() const noexcept { return ps_.size(); }
  Index dim() const noexcept { return ps_.front().dim(); }
  const Projector& operator[](std::size_t k) const { return ps_.at(k); }

 private:
  std::vector<Projector> ps_;
};

struct NoGoCertificate {
  /// pi[k][i] = g(P_k, Q_i).
  std::vector<std::vector<Projector>> pi;
  Matrix defect;
  RealVector defect_spectrum;
  Index defect_rank = 0;
  double trace_defect = 0.0;
  std::vector<std::pair<std::size_t, std::size_t>> forced_zero;
  bool no_additive_joint = false;
  double tolerance = 1e-8;
};

/// Largest admissible joint operators and the defect D = I - sum g(P_k, Q_i).
inline NoGoCertificate no_go_certificate(const ProjectiveResolution& p, const ProjectiveResolution& q,
                                         const Tolerances& tol = {}) {
  if (p.dim() != q.dim()) throw Error(ErrorCode::DimensionMismatch, "resolutions differ in dimension");
  const Index n = p.dim();
  NoGoCertificate cert;
  cert.tolerance = tol.band;
  Matrix sum = zeros(n);
  for (std::size_t k = 0; k < p.size(); ++k) {
    std::vector<Projector> row;
    for (std::size_t i = 0; i < q.size(); ++i) {
      auto g = intersection_projector(p[k], q[i], IntersectionMethod::Spectral, tol);
      if (g.rank() == 0) cert.forced_zero.emplace_back(k, i);
      sum += g.matrix();
      row.push_back(std::move(g));
    }
    cert.pi.push_back(std::move(row));
  }
  cert.defect = HermitianOperator::hermitian_part(identity(n) - sum).matrix();
  cert.defect_spectrum = eigh(HermitianOperator::hermitian_part(cert.defect)).values;
  cert.defect_rank = (cert.defect_spectrum.array().abs() > tol.band).count();
  cert.trace_defect = real_trace(cert.defect);
  cert.no_additive_joint = op_norm(cert.defect) > tol.band;
  return cert;
}

enum class MeasurementOrder { PQ, QP };

/// PQ: tr(Q P rho P), P measured first. QP: tr(P Q rho Q).
inline double two_time_probability(const DensityMatrix& rho, const Projector& p, const Projector& q,
                                   MeasurementOrder order) {
  require_same_dim(rho.dim(), p.dim());
  require_same_dim(rho.dim(), q.dim());
  const Matrix& r = rho.matrix();
  const Matrix& pm = p.matrix();
  const Matrix& qm = q.matrix();
  if (order == MeasurementOrder::PQ) return (qm * pm * r * pm).trace().real();
  return (pm * qm * r * qm).trace().real();
}

/// tr(rho (PQP + QPQ) / 2).
inline double two_time_mean(const DensityMatrix& rho, const Projector& p, const Projector& q) {
  require_same_dim(rho.dim(), p.dim());
  require_same_dim(rho.dim(), q.dim());
  const Matrix& pm = p.matrix();
  const Matrix& qm = q.matrix();
  return rho.expectation((pm * qm * pm + qm * pm * qm) / 2.0);
}

struct MarginalDefect {
  /// first[k] = |sum_i tr(Q_i P_k rho P_k) - tr(P_k rho)|.
  std::vector<double> first;
  /// second[i] = |sum_k tr(Q_i P_k rho P_k) - tr(Q_i rho)|.
  std::vector<double> second;
  /// joint[k][i] = tr(Q_i P_k rho P_k).
  std::vector<std::vector<double>> joint;
  bool first_exact = true;
  double max_first = 0.0;
  double max_second = 0.0;
};

/// Marginals of the P-first two-time table.
inline MarginalDefect marginal_defect(const DensityMatrix& rho, const ProjectiveResolution& p,
                                      const ProjectiveResolution& q, double exact_tol = 1e-10) {
  require_same_dim(rho.dim(), p.dim());
  require_same_dim(rho.dim(), q.dim());
  MarginalDefect out;
  out.joint.assign(p.size(), std::vector<double>(q.size(), 0.0));
  for (std::size_t k = 0; k < p.size(); ++k)
    for (std::size_t i = 0; i < q.size(); ++i)
      out.joint[k][i] = two_time_probability(rho, p[k], q[i], MeasurementOrder::PQ);
  for (std::size_t k = 0; k < p.size(); ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) s += out.joint[k][i];
    out.first.push_back(std::abs(s - rho.expectation(p[k].matrix())));
  }
  for (std::size_t i = 0; i < q.size(); ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) s += out.joint[k][i];
    out.second.push_back(std::abs(s - rho.expectation(q[i].matrix())));
  }
  out.max_first = *std::max_element(out.first.begin(), out.first.end());
  out.max_second = *std::max_element(out.second.begin(), out.second.end());
  out.first_exact = out.max_first <= exact_tol;
  return out;
}

struct MeanWitness {
  Matrix rho;
  Matrix p;
  Matrix q;
  double mean = 0.0;
  double joint = 0.0;
  std::size_t trial = 0;
};

struct MeanIncompatibility {
  std::optional<MeanWitness> above;  // mean > tr(rho P Q)
  std::optional<MeanWitness> below;  // mean < tr(rho P Q)
  std::size_t trials_above = 0;
  std::size_t trials_below = 0;
  std::uint64_t seed = 0;
};

/// Seeded search in dim 3 for states commuting with P where the two-time
/// mean differs from tr(rho P Q) in each direction. A missing witness means
/// none was found within the budget.
inline MeanIncompatibility find_mean_incompatibility(std::uint64_t seed = 0, std::size_t max_trials = 10000,
                                                     double threshold = 1e-6) {
  constexpr Index dim = 3;
  MeanIncompatibility out;
  out.seed = seed;
  Rng rng(seed);
  for (std::size_t t = 1; t <= max_trials && !(out.above && out.below); ++t) {
    const Projector p = random_projector(dim, rng.uniform_int(1, dim - 1), rng);
    const Projector q = random_projector(dim, rng.uniform_int(1, dim - 1), rng);
    const DensityMatrix rho = random_commuting_state(p, rng);
    const double mean = two_time_mean(rho, p, q);
    const double joint = rho.expectation(p.matrix() * q.matrix());
    if (!out.above) out.trials_above = t;
    if (!out.below) out.trials_below = t;
    MeanWitness w{rho.matrix(), p.matrix(), q.matrix(), mean, joint, t};
    if (!out.above && mean - joint > threshold) out.above = w;
    else if (!out.below && joint - mean > threshold) out.below = w;
  }
  return out;
}

}  // namespace iqprob
