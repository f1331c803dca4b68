#pragma once

// Classical imprecise probability on a finite outcome set. Events are
// bitmasks over n <= 20 outcomes; set functions are stored densely,
// indexed by mask.

#include "iqprob/hermitian_core.hpp"
#include "iqprob/imprecise_probability.hpp"
#include "iqprob/random.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace iqprob::classical {

using Event = std::uint32_t;

class EventSpace {
 public:
  static constexpr unsigned max_outcomes = 20;

  explicit EventSpace(unsigned n) : n_(n) {
    if (n < 1 || n > max_outcomes)
      throw Error(ErrorCode::InvalidArgument, "event space needs 1..20 outcomes, got " + std::to_string(n));
  }

  unsigned outcomes() const noexcept { return n_; }
  std::size_t event_count() const noexcept { return std::size_t{1} << n_; }
  Event full() const noexcept { return static_cast<Event>(event_count() - 1); }
  static constexpr Event empty() noexcept { return 0; }
  Event complement(Event a) const noexcept { return full() & ~a; }
  bool contains(Event a) const noexcept { return (a & ~full()) == 0; }

  friend bool operator==(const EventSpace&, const EventSpace&) = default;

 private:
  unsigned n_;
};

/// Lower/upper set functions. Only structural validity is enforced here;
/// the axioms themselves are reported by check_axioms_classical.
class ImpreciseMeasure {
 public:
  ImpreciseMeasure(EventSpace space, std::vector<double> lower, std::vector<double> upper)
      : space_(space), lower_(std::move(lower)), upper_(std::move(upper)) {
    if (lower_.size() != space_.event_count() || upper_.size() != space_.event_count())
      throw Error(ErrorCode::InvalidMeasure, "lower and upper need 2^n entries");
    for (std::size_t i = 0; i < lower_.size(); ++i)
      if (!std::isfinite(lower_[i]) || !std::isfinite(upper_[i]))
        throw Error(ErrorCode::InvalidMeasure, "non-finite value at event " + std::to_string(i));
  }

  /// upper(A) = 1 - lower(complement of A).
  static ImpreciseMeasure from_lower(EventSpace space, std::vector<double> lower) {
    if (lower.size() != space.event_count()) throw Error(ErrorCode::InvalidMeasure, "lower needs 2^n entries");
    std::vector<double> upper(lower.size());
    for (Event a = 0; a <= space.full(); ++a) upper[a] = 1.0 - lower[space.complement(a)];
    return {space, std::move(lower), std::move(upper)};
  }

  /// lower = 0 and upper = 1 off the boundary events.
  static ImpreciseMeasure vacuous(EventSpace space) {
    std::vector<double> lower(space.event_count(), 0.0), upper(space.event_count(), 1.0);
    lower[space.full()] = 1.0;
    upper[EventSpace::empty()] = 0.0;
    return {space, std::move(lower), std::move(upper)};
  }

  const EventSpace& space() const noexcept { return space_; }
  double lower(Event a) const { return lower_.at(a); }
  double upper(Event a) const { return upper_.at(a); }
  const std::vector<double>& lower_values() const noexcept { return lower_; }
  const std::vector<double>& upper_values() const noexcept { return upper_; }

 private:
  EventSpace space_;
  std::vector<double> lower_;
  std::vector<double> upper_;
};

inline std::vector<double> event_probabilities(const EventSpace& space, const std::vector<double>& dist) {
  std::vector<double> out(space.event_count(), 0.0);
  for (Event a = 1; a <= space.full(); ++a) {
    const Event low = a & (~a + 1);
    out[a] = out[a ^ low] + dist[static_cast<std::size_t>(std::countr_zero(low))];
  }
  return out;
}

/// Non-empty set of probability vectors on a common outcome set.
class CredalSet {
 public:
  CredalSet(EventSpace space, std::vector<std::vector<double>> distributions)
      : space_(space), dists_(std::move(distributions)) {
    if (dists_.empty()) throw Error(ErrorCode::EmptyCredalSet, "credal set has no distributions");
    for (std::size_t k = 0; k < dists_.size(); ++k) {
      const auto& d = dists_[k];
      if (d.size() != space_.outcomes())
        throw Error(ErrorCode::InvalidDistribution, "distribution " + std::to_string(k) + " has wrong length");
      double total = 0.0;
      for (double x : d) {
        if (!(x >= 0.0) || !std::isfinite(x))
          throw Error(ErrorCode::InvalidDistribution, "distribution " + std::to_string(k) + " has a negative entry");
        total += x;
      }
      if (std::abs(total - 1.0) > 1e-12)
        throw Error(ErrorCode::InvalidDistribution, "distribution " + std::to_string(k) + " sums to " +
                                                        std::to_string(total));
    }
  }

  const EventSpace& space() const noexcept { return space_; }
  const std::vector<std::vector<double>>& distributions() const noexcept { return dists_; }

 private:
  EventSpace space_;
  std::vector<std::vector<double>> dists_;
};

/// Pointwise min / max of P(A) over the credal set.
inline ImpreciseMeasure envelope(const CredalSet& c) {
  const auto& space = c.space();
  std::vector<double> lower(space.event_count(), std::numeric_limits<double>::infinity());
  std::vector<double> upper(space.event_count(), -std::numeric_limits<double>::infinity());
  for (const auto& d : c.distributions()) {
    const auto probs = event_probabilities(space, d);
    for (std::size_t a = 0; a < probs.size(); ++a) {
      lower[a] = std::min(lower[a], probs[a]);
      upper[a] = std::max(upper[a], probs[a]);
    }
  }
  return {space, std::move(lower), std::move(upper)};
}

inline CredalSet random_credal_set(EventSpace space, std::size_t count, Rng& rng) {
  std::vector<std::vector<double>> dists;
  for (std::size_t k = 0; k < count; ++k) {
    auto w = dirichlet_weights(space.outcomes(), rng);
    // Renormalize so the sum is exact to rounding.
    double total = 0.0;
    for (double x : w) total += x;
    for (double& x : w) x /= total;
    dists.push_back(std::move(w));
  }
  return {space, std::move(dists)};
}

/// Joint lower/upper probability of A and B: the measure of A ∩ B.
inline ProbabilityInterval classical_joint(const ImpreciseMeasure& m, Event a, Event b) {
  if (!m.space().contains(a) || !m.space().contains(b))
    throw Error(ErrorCode::InvalidArgument, "event outside the outcome set");
  return {m.lower(a & b), m.upper(a & b)};
}

// ---------------------------------------------------------------------------
// Reports

struct InequalityCheck {
  std::string name;
  std::string statement;
  bool pass = true;
  double worst_margin = std::numeric_limits<double>::infinity();
  std::size_t checked = 0;
  Event witness_a = 0;
  Event witness_b = 0;
};

struct ClassicalReport {
  std::vector<InequalityCheck> checks;
  bool exhaustive = true;
  double tolerance = 1e-12;

  bool all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const InequalityCheck& c) { return c.pass; });
  }

  const InequalityCheck* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

struct ClassicalCheckOptions {
  double tolerance = 1e-12;
  unsigned exhaustive_axioms_up_to = 10;    // outcomes; disjoint-pair checks
  unsigned exhaustive_derived_up_to = 8;    // outcomes; all-pair checks
  std::size_t samples = 100000;
  std::uint64_t seed = 0;
};

namespace detail {

class CheckBuilder {
 public:
  CheckBuilder(std::string name, std::string statement) {
    c_.name = std::move(name);
    c_.statement = std::move(statement);
  }

  void record(double margin, Event a, Event b = 0) {
    ++c_.checked;
    if (margin < c_.worst_margin) {
      c_.worst_margin = margin;
      c_.witness_a = a;
      c_.witness_b = b;
    }
  }

  InequalityCheck finish(double tol) {
    if (c_.checked == 0) c_.worst_margin = 0.0;
    c_.pass = c_.worst_margin >= -tol;
    return std::move(c_);
  }

 private:
  InequalityCheck c_;
};

// Calls f(a, b) for disjoint pairs: every pair when exhaustive, otherwise
// `samples` seeded draws.
inline void for_disjoint_pairs(const EventSpace& s, bool exhaustive, std::size_t samples, Rng& rng,
                               const std::function<void(Event, Event)>& f) {
  if (exhaustive) {
    for (Event a = 0; a <= s.full(); ++a) {
      const Event rest = s.complement(a);
      for (Event b = rest;; b = (b - 1) & rest) {
        f(a, b);
        if (b == 0) break;
      }
    }
    return;
  }
  for (std::size_t k = 0; k < samples; ++k) {
    Event a = 0, b = 0;
    for (unsigned i = 0; i < s.outcomes(); ++i) {
      const double u = rng.uniform();
      if (u < 1.0 / 3.0) a |= Event{1} << i;
      else if (u < 2.0 / 3.0) b |= Event{1} << i;
    }
    f(a, b);
  }
}

// Calls f(a, b) for b a subset of a.
inline void for_nested_pairs(const EventSpace& s, bool exhaustive, std::size_t samples, Rng& rng,
                             const std::function<void(Event, Event)>& f) {
  for_disjoint_pairs(s, exhaustive, samples, rng, [&](Event x, Event y) { f(x | y, y); });
}

inline void for_all_pairs(const EventSpace& s, bool exhaustive, std::size_t samples, Rng& rng,
                          const std::function<void(Event, Event)>& f) {
  if (exhaustive) {
    for (Event a = 0; a <= s.full(); ++a)
      for (Event b = 0; b <= s.full(); ++b) f(a, b);
    return;
  }
  for (std::size_t k = 0; k < samples; ++k) {
    Event a = 0, b = 0;
    for (unsigned i = 0; i < s.outcomes(); ++i) {
      if (rng.uniform() < 0.5) a |= Event{1} << i;
      if (rng.uniform() < 0.5) b |= Event{1} << i;
    }
    f(a, b);
  }
}

}  // namespace detail

/// Generalized Kolmogorov axioms: lower(empty) = 0, upper(full) = 1,
/// conjugacy, superadditive lower and subadditive upper on disjoint events.
inline ClassicalReport check_axioms_classical(const ImpreciseMeasure& m, const ClassicalCheckOptions& opts = {}) {
  const auto& s = m.space();
  const bool exhaustive = s.outcomes() <= opts.exhaustive_axioms_up_to;
  Rng rng(opts.seed);
  ClassicalReport report;
  report.exhaustive = exhaustive;
  report.tolerance = opts.tolerance;

  detail::CheckBuilder empty("lower_empty_is_zero", "lower(empty) = 0");
  empty.record(-std::abs(m.lower(EventSpace::empty())), EventSpace::empty());
  detail::CheckBuilder full("upper_full_is_one", "upper(full) = 1");
  full.record(-std::abs(m.upper(s.full()) - 1.0), s.full());
  detail::CheckBuilder conj("conjugacy", "upper(A) = 1 - lower(complement A)");
  for (Event a = 0; a <= s.full(); ++a) conj.record(-std::abs(m.upper(a) - 1.0 + m.lower(s.complement(a))), a);

  detail::CheckBuilder super("lower_superadditive", "lower(A u B) >= lower(A) + lower(B) for disjoint A, B");
  detail::CheckBuilder sub("upper_subadditive", "upper(A u B) <= upper(A) + upper(B) for disjoint A, B");
  detail::for_disjoint_pairs(s, exhaustive, opts.samples, rng, [&](Event a, Event b) {
    super.record(m.lower(a | b) - m.lower(a) - m.lower(b), a, b);
    sub.record(m.upper(a) + m.upper(b) - m.upper(a | b), a, b);
  });

  for (auto* c : {&empty, &full, &conj, &super, &sub}) report.checks.push_back(c->finish(opts.tolerance));
  return report;
}

/// Consequences of the axioms: monotonicity, mixed bounds, range, the
/// modular-type inequality, width subadditivity and the three two-event chains.
inline ClassicalReport check_derived_inequalities(const ImpreciseMeasure& m, const ClassicalCheckOptions& opts = {}) {
  const auto& s = m.space();
  const bool exhaustive = s.outcomes() <= opts.exhaustive_derived_up_to;
  Rng rng(opts.seed);
  ClassicalReport report;
  report.exhaustive = exhaustive;
  report.tolerance = opts.tolerance;
  const auto lp = [&](Event a) { return m.lower(a); };
  const auto up = [&](Event a) { return m.upper(a); };

  detail::CheckBuilder mono_up("upper_monotone", "A >= B implies upper(A) >= upper(B)");
  detail::CheckBuilder mono_lo("lower_monotone", "A >= B implies lower(A) >= lower(B)");
  detail::for_nested_pairs(s, exhaustive, opts.samples, rng, [&](Event a, Event b) {
    mono_up.record(up(a) - up(b), a, b);
    mono_lo.record(lp(a) - lp(b), a, b);
  });

  detail::CheckBuilder mixed("mixed_bound", "upper(A u B) >= upper(A) + lower(B) >= lower(A u B) for disjoint A, B");
  detail::CheckBuilder width("width_subadditive", "width(A u B) <= width(A) + width(B) for disjoint A, B");
  detail::for_disjoint_pairs(s, exhaustive, opts.samples, rng, [&](Event a, Event b) {
    const double mid = up(a) + lp(b);
    mixed.record(std::min(up(a | b) - mid, mid - lp(a | b)), a, b);
    width.record((up(a) - lp(a)) + (up(b) - lp(b)) - (up(a | b) - lp(a | b)), a, b);
  });

  detail::CheckBuilder range("range", "0 <= lower(A) <= upper(A) <= 1");
  for (Event a = 0; a <= s.full(); ++a) range.record(std::min({lp(a), up(a) - lp(a), 1.0 - up(a)}), a);

  detail::CheckBuilder modular("modular_inequality", "lower(A) + lower(B) <= upper(A u B) + lower(A n B)");
  detail::CheckBuilder chain1("chain_lower_upper",
                              "lower(AuB) + lower(AnB) <= lower(A) + upper(B) <= upper(AuB) + upper(AnB)");
  detail::CheckBuilder chain2("chain_union_lower",
                              "lower(A) + lower(B) <= lower(AuB) + upper(AnB) <= upper(A) + upper(B)");
  detail::CheckBuilder chain3("chain_union_upper",
                              "lower(A) + lower(B) <= upper(AuB) + lower(AnB) <= upper(A) + upper(B)");
  detail::for_all_pairs(s, exhaustive, opts.samples, rng, [&](Event a, Event b) {
    const Event u = a | b, n = a & b;
    modular.record(up(u) + lp(n) - lp(a) - lp(b), a, b);
    const double m1 = lp(a) + up(b);
    chain1.record(std::min(m1 - lp(u) - lp(n), up(u) + up(n) - m1), a, b);
    const double m2 = lp(u) + up(n);
    chain2.record(std::min(m2 - lp(a) - lp(b), up(a) + up(b) - m2), a, b);
    const double m3 = up(u) + lp(n);
    chain3.record(std::min(m3 - lp(a) - lp(b), up(a) + up(b) - m3), a, b);
  });

  for (auto* c : {&mono_up, &mono_lo, &mixed, &range, &modular, &width, &chain1, &chain2, &chain3})
    report.checks.push_back(c->finish(opts.tolerance));
  return report;
}

}  // namespace iqprob::classical
