#pragma once

// Lower and upper joint-probability operators for a pair of projectors,
// the probability intervals they induce on states, comparative queries,
// and an executable check of the defining axioms.

#include "iqprob/hermitian_core.hpp"
#include "iqprob/projector_geometry.hpp"
#include "iqprob/random.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace iqprob {

/// lower = g(p, q)
inline HermitianOperator lower_operator(const Projector& p, const Projector& q, const Tolerances& tol = {},
                                        IntersectionMethod method = IntersectionMethod::Spectral) {
  return intersection_projector(p, q, method, tol).op();
}

/// upper = I - (p - q)^2 - g(I - p, I - q)
inline HermitianOperator upper_operator(const Projector& p, const Projector& q, const Tolerances& tol = {},
                                        IntersectionMethod method = IntersectionMethod::Spectral) {
  require_same_dim(p.dim(), q.dim());
  const Matrix d = p.matrix() - q.matrix();
  const auto neither = intersection_projector(p.complement(), q.complement(), method, tol);
  return HermitianOperator::hermitian_part(identity(p.dim()) - d * d - neither.matrix());
}

struct ProbabilityOperatorPair {
  HermitianOperator lower;
  HermitianOperator upper;
  Projector p;
  Projector q;

  Matrix uncertainty() const { return upper.matrix() - lower.matrix(); }
};

inline ProbabilityOperatorPair bounds(const Projector& p, const Projector& q, const Tolerances& tol = {},
                                      IntersectionMethod method = IntersectionMethod::Spectral) {
  return {lower_operator(p, q, tol, method), upper_operator(p, q, tol, method), p, q};
}

/// Closed interval [lower, upper] inside [0, 1].
class ProbabilityInterval {
 public:
  static constexpr double slack = 1e-12;

  ProbabilityInterval(double lower, double upper) {
    if (!std::isfinite(lower) || !std::isfinite(upper) || lower < -slack || upper > 1.0 + slack ||
        lower > upper + slack)
      throw Error(ErrorCode::IntervalOutOfRange,
                  "[" + std::to_string(lower) + ", " + std::to_string(upper) + "] is not a sub-interval of [0,1]");
    lower_ = std::clamp(lower, 0.0, 1.0);
    upper_ = std::clamp(upper, lower_, 1.0);
  }

  double lower() const noexcept { return lower_; }
  double upper() const noexcept { return upper_; }
  double width() const noexcept { return upper_ - lower_; }
  bool is_precise(double tol = slack) const noexcept { return width() <= tol; }

  friend bool operator==(const ProbabilityInterval&, const ProbabilityInterval&) = default;

 private:
  double lower_ = 0.0;
  double upper_ = 0.0;
};

inline ProbabilityInterval probability_interval(const DensityMatrix& rho, const Projector& p, const Projector& q,
                                                const Tolerances& tol = {}) {
  require_same_dim(p.dim(), q.dim());
  require_same_dim(rho.dim(), p.dim());
  if (commutes(p.matrix(), q.matrix(), tol.herm)) {
    const double joint = rho.expectation(p.matrix() * q.matrix());
    return {joint, joint};
  }
  const auto ops = bounds(p, q, tol);
  return {rho.expectation(ops.lower.matrix()), rho.expectation(ops.upper.matrix())};
}

/// Bounds divided by tr(rho q). The upper bound saturates at 1: past that
/// point it carries no information.
inline ProbabilityInterval conditional_interval(const DensityMatrix& rho, const Projector& p, const Projector& q,
                                                const Tolerances& tol = {}, double eps_div = 1e-12) {
  require_same_dim(rho.dim(), q.dim());
  const double weight = rho.expectation(q.matrix());
  if (weight <= eps_div)
    throw Error(ErrorCode::ConditionOnNullEvent, "tr(rho q) = " + std::to_string(weight));
  const auto joint = probability_interval(rho, p, q, tol);
  const double lo = joint.lower() / weight;
  return {std::min(lo, 1.0), std::min(joint.upper() / weight, 1.0)};
}

/// Hausdorff distance between intervals.
inline double interval_distance(const ProbabilityInterval& a, const ProbabilityInterval& b) {
  return std::max(std::abs(a.lower() - b.lower()), std::abs(a.upper() - b.upper()));
}

struct ProjectorPair {
  Projector p;
  Projector q;
};

struct DominanceVerdict {
  bool surely_more_probable = false;
  double margin = 0.0;  // lower(pair1) - upper(pair2)
};

/// pair1 is surely more probable than pair2 on rho when its lower
/// probability strictly exceeds the upper probability of pair2.
inline DominanceVerdict sure_dominance(const DensityMatrix& rho, const ProjectorPair& first,
                                       const ProjectorPair& second, const Tolerances& tol = {}) {
  require_same_dim(first.p.dim(), second.p.dim());
  const auto lo = probability_interval(rho, first.p, first.q, tol).lower();
  const auto up = probability_interval(rho, second.p, second.q, tol).upper();
  const double margin = lo - up;
  return {margin > ProbabilityInterval::slack, margin};
}

struct DominanceSpectrum {
  RealVector eigenvalues;           // ascending, of lower(pair1) - upper(pair2)
  std::optional<Vector> witness;    // eigenvector of the largest eigenvalue, if positive
};

inline DominanceSpectrum dominance_spectrum(const ProjectorPair& first, const ProjectorPair& second,
                                            const Tolerances& tol = {}) {
  require_same_dim(first.p.dim(), second.p.dim());
  const Matrix diff = lower_operator(first.p, first.q, tol).matrix() - upper_operator(second.p, second.q, tol).matrix();
  const auto spec = eigh(HermitianOperator::hermitian_part(diff));
  DominanceSpectrum out{spec.values, std::nullopt};
  const Index top = spec.values.size() - 1;
  if (spec.values(top) > ProbabilityInterval::slack) out.witness = spec.vectors.col(top);
  return out;
}

// ---------------------------------------------------------------------------
// Axiom checker

struct AxiomResult {
  std::string name;
  std::string description;
  bool applicable = true;
  bool pass = true;
  double worst_margin = 0.0;  // >= -tolerance passes; negative means violation
  std::optional<Matrix> witness;
};

struct AxiomReport {
  std::vector<AxiomResult> results;
  std::size_t sampled_states = 0;
  std::size_t supplied_states_used = 0;
  std::size_t supplied_states_skipped = 0;  // supplied but commuting with neither p nor q
  double tolerance = 0.0;

  bool all_pass() const {
    return std::all_of(results.begin(), results.end(), [](const AxiomResult& r) { return r.pass; });
  }

  const AxiomResult* find(const std::string& name) const {
    for (const auto& r : results)
      if (r.name == name) return &r;
    return nullptr;
  }
};

struct AxiomOptions {
  double tolerance = 1e-8;
  std::size_t samples = 10;  // synthesized states, split between "commutes with q" and "commutes with p"
  std::uint64_t seed = 0;
};

namespace detail {

// Pinching X -> pXp + (I-p)X(I-p).
inline Matrix pinch(const Matrix& x, const Matrix& p) {
  const Matrix c = identity(p.rows()) - p;
  return p * x * p + c * x * c;
}

class AxiomAccumulator {
 public:
  AxiomAccumulator(std::string name, std::string description, double tol)
      : r_{std::move(name), std::move(description), true, true, std::numeric_limits<double>::infinity(), {}},
        tol_(tol) {}

  // Inequality slack: min eigenvalue of an operator that must be PSD.
  void slack(const Matrix& must_be_psd) {
    const auto spec = eigh_matrix((must_be_psd + must_be_psd.adjoint()) / 2.0);
    const double v = spec.values(0);
    if (v < r_.worst_margin) {
      r_.worst_margin = v;
      if (v < -tol_) r_.witness = Matrix(spec.vectors.col(0));
    }
  }

  void scalar_slack(double v) { r_.worst_margin = std::min(r_.worst_margin, v); }

  // Equality defect: operator norm of a matrix that must vanish.
  void equal(const Matrix& must_vanish) {
    const double v = -op_norm(must_vanish);
    if (v < r_.worst_margin) {
      r_.worst_margin = v;
      if (v < -tol_) r_.witness = must_vanish;
    }
  }

  AxiomResult finish(bool applicable = true) {
    r_.applicable = applicable;
    if (!std::isfinite(r_.worst_margin)) r_.worst_margin = 0.0;
    r_.pass = r_.worst_margin >= -tol_;
    return std::move(r_);
  }

 private:
  AxiomResult r_;
  double tol_;
};

}  // namespace detail

/// Checks the axioms for the (lower, upper) pair of (p, q):
///   bounds_ordered            0 <= lower <= upper <= I
///   symmetric                 symmetry under p <-> q
///   commuting_reduction       lower = upper = pq when [p, q] = 0
///   commuting_state_sandwich  tr(rho lower) <= tr(rho pq) <= tr(rho upper) for rho commuting with p or q
///   commutes_with_pair        lower and upper commute with p and q
/// plus [lower, upper] = 0 and the marginals omega(p, I) = p, omega(p, 0) = 0.
///
/// The sandwich is checked two ways: at operator level through the pinching by p and
/// by q (necessary and sufficient for every commuting state), and on sampled
/// commuting states, which is evidence only.
inline AxiomReport check_axioms(const Projector& p, const Projector& q, const std::vector<DensityMatrix>& states = {},
                                const AxiomOptions& opts = {}, const Tolerances& tol = {}) {
  require_same_dim(p.dim(), q.dim());
  for (const auto& s : states) require_same_dim(s.dim(), p.dim());
  const Index n = p.dim();
  const double t = opts.tolerance;
  const Matrix& pm = p.matrix();
  const Matrix& qm = q.matrix();
  const Matrix id = identity(n);

  const auto ops = bounds(p, q, tol);
  const Matrix& lo = ops.lower.matrix();
  const Matrix& up = ops.upper.matrix();
  AxiomReport report;
  report.tolerance = t;

  {
    detail::AxiomAccumulator a("bounds_ordered", "0 <= lower <= upper <= I", t);
    a.slack(lo);
    a.slack(up - lo);
    a.slack(id - up);
    report.results.push_back(a.finish());
  }
  {
    detail::AxiomAccumulator a("symmetric", "lower(p,q) = lower(q,p), upper(p,q) = upper(q,p)", t);
    const auto swapped = bounds(q, p, tol);
    a.equal(lo - swapped.lower.matrix());
    a.equal(up - swapped.upper.matrix());
    report.results.push_back(a.finish());
  }
  {
    detail::AxiomAccumulator a("commuting_reduction", "lower = upper = pq when [p,q] = 0", t);
    const bool commuting = commutes(pm, qm, tol.herm);
    if (commuting) {
      a.equal(lo - pm * qm);
      a.equal(up - pm * qm);
    }
    report.results.push_back(a.finish(commuting));
  }
  {
    detail::AxiomAccumulator a("commuting_state_sandwich", "tr(rho lower) <= tr(rho pq) <= tr(rho upper) for rho commuting with p or q", t);
    const Matrix pq = pm * qm;
    for (const Matrix* proj : {&qm, &pm}) {
      a.slack(detail::pinch(pq - lo, *proj));
      a.slack(detail::pinch(up - pq, *proj));
    }
    auto check_state = [&](const DensityMatrix& rho) {
      const double joint = rho.expectation(pq);
      a.scalar_slack(joint - rho.expectation(lo));
      a.scalar_slack(rho.expectation(up) - joint);
    };
    for (const auto& rho : states) {
      if (commutes(rho.matrix(), pm, tol.herm) || commutes(rho.matrix(), qm, tol.herm)) {
        check_state(rho);
        ++report.supplied_states_used;
      } else {
        ++report.supplied_states_skipped;
      }
    }
    Rng rng(opts.seed);
    for (std::size_t k = 0; k < opts.samples; ++k) {
      check_state(random_commuting_state(k % 2 == 0 ? q : p, rng));
      ++report.sampled_states;
    }
    report.results.push_back(a.finish());
  }
  {
    detail::AxiomAccumulator a("commutes_with_pair", "[omega, p] = [omega, q] = 0 for omega = lower, upper", t);
    a.equal(commutator(lo, pm));
    a.equal(commutator(lo, qm));
    a.equal(commutator(up, pm));
    a.equal(commutator(up, qm));
    report.results.push_back(a.finish());
  }
  {
    detail::AxiomAccumulator a("lower_upper_commute", "[lower, upper] = 0", t);
    a.equal(commutator(lo, up));
    report.results.push_back(a.finish());
  }
  {
    detail::AxiomAccumulator a("marginals", "omega(x, I) = x and omega(x, 0) = 0 for x = p, q", t);
    const auto one = Projector::identity(n);
    const auto nil = Projector::zero(n);
    for (const Projector* x : {&p, &q}) {
      const auto with_one = bounds(*x, one, tol);
      const auto with_nil = bounds(*x, nil, tol);
      a.equal(with_one.lower.matrix() - x->matrix());
      a.equal(with_one.upper.matrix() - x->matrix());
      a.equal(with_nil.lower.matrix());
      a.equal(with_nil.upper.matrix());
    }
    report.results.push_back(a.finish());
  }
  return report;
}

// ---------------------------------------------------------------------------
// Failure of subadditivity for I - g(I-p, I-q)

struct SubadditivityWitness {
  bool found = false;
  std::size_t trials = 0;
  Matrix p;                      // rank-1 projector
  RealVector excess_eigenvalues; // of g(I-p,I-q) + g(I-p,I-k) - I
};

/// Searches random rank-1 p in dimension 3 against q = diag(1,0,0),
/// k = diag(0,0,1) for g(I-p,I-q) + g(I-p,I-k) not bounded by I.
inline SubadditivityWitness find_non_subadditivity_witness(std::uint64_t seed = 0, std::size_t max_trials = 10000,
                                                           double threshold = 1e-10, const Tolerances& tol = {}) {
  Matrix qm = zeros(3), km = zeros(3);
  qm(0, 0) = 1.0;
  km(2, 2) = 1.0;
  const auto q = Projector::validate(qm, tol);
  const auto k = Projector::validate(km, tol);
  Rng rng(seed);
  SubadditivityWitness out;
  for (std::size_t trial = 1; trial <= max_trials; ++trial) {
    const auto p = random_projector(3, 1, rng);
    const auto pc = p.complement();
    const Matrix sum = intersection_projector(pc, q.complement(), IntersectionMethod::Spectral, tol).matrix() +
                       intersection_projector(pc, k.complement(), IntersectionMethod::Spectral, tol).matrix();
    const auto values = eigh(HermitianOperator::hermitian_part(sum - identity(3))).values;
    out.trials = trial;
    if (values.maxCoeff() > threshold) {
      out.found = true;
      out.p = p.matrix();
      out.excess_eigenvalues = values;
      return out;
    }
  }
  return out;
}

}  // namespace iqprob
