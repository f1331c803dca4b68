#include "oracle.hpp"

#include <gtest/gtest.h>

using namespace iqprob;
using namespace iqprob::classical;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an iqprob::Error";
  return ErrorCode::InvalidArgument;
}

/// Number of (A, B) pairs with A, B disjoint: 3^n.
std::size_t disjoint_pairs(unsigned n) {
  std::size_t v = 1;
  for (unsigned i = 0; i < n; ++i) v *= 3;
  return v;
}

}  // namespace

TEST(EventSpace, Basics) {
  const EventSpace s(3);
  EXPECT_EQ(s.event_count(), 8u);
  EXPECT_EQ(s.full(), 0b111u);
  EXPECT_EQ(s.complement(0b101), 0b010u);
  EXPECT_FALSE(s.contains(0b1000));
  EXPECT_EQ(code_of([] { EventSpace(0); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { EventSpace(21); }), ErrorCode::InvalidArgument);
}

TEST(EventProbabilities, MatchDirectSums) {
  Rng rng(1);
  const EventSpace s(6);
  const auto d = dirichlet_weights(6, rng);
  const auto probs = event_probabilities(s, d);
  for (Event a = 0; a <= s.full(); ++a) EXPECT_NEAR(probs[a], oracle::event_probability(a, d), 1e-15);
}

TEST(CredalSet, ValidationErrors) {
  const EventSpace s(2);
  EXPECT_EQ(code_of([&] { CredalSet(s, {}); }), ErrorCode::EmptyCredalSet);
  EXPECT_EQ(code_of([&] { CredalSet(s, {{0.5, 0.25, 0.25}}); }), ErrorCode::InvalidDistribution);
  EXPECT_EQ(code_of([&] { CredalSet(s, {{1.5, -0.5}}); }), ErrorCode::InvalidDistribution);
  EXPECT_EQ(code_of([&] { CredalSet(s, {{0.5, 0.6}}); }), ErrorCode::InvalidDistribution);
}

TEST(Envelope, SingleDistributionIsPrecise) {
  const EventSpace s(3);
  const std::vector<double> d{0.2, 0.3, 0.5};
  const auto m = envelope(CredalSet(s, {d}));
  for (Event a = 0; a <= s.full(); ++a) {
    EXPECT_NEAR(m.lower(a), oracle::event_probability(a, d), 1e-15);
    EXPECT_EQ(m.lower(a), m.upper(a));
  }
  EXPECT_TRUE(check_axioms_classical(m).all_pass());
  EXPECT_TRUE(check_derived_inequalities(m).all_pass());
}

TEST(Envelope, AllPointMassesIsVacuous) {
  const EventSpace s(4);
  std::vector<std::vector<double>> ds;
  for (unsigned i = 0; i < 4; ++i) {
    std::vector<double> d(4, 0.0);
    d[i] = 1.0;
    ds.push_back(d);
  }
  const auto m = envelope(CredalSet(s, ds));
  const auto v = ImpreciseMeasure::vacuous(s);
  EXPECT_EQ(m.lower_values(), v.lower_values());
  EXPECT_EQ(m.upper_values(), v.upper_values());
  EXPECT_TRUE(check_axioms_classical(v).all_pass());
  EXPECT_TRUE(check_derived_inequalities(v).all_pass());
}

TEST(Envelope, MatchesCredalOracle) {
  Rng rng(2);
  const EventSpace s(5);
  for (int t = 0; t < 50; ++t) {
    const auto c = random_credal_set(s, 1 + static_cast<std::size_t>(t % 7), rng);
    const auto m = envelope(c);
    for (Event a = 0; a <= s.full(); ++a) {
      EXPECT_NEAR(m.lower(a), oracle::credal_lower(a, c.distributions()), 1e-14);
      EXPECT_NEAR(m.upper(a), oracle::credal_upper(a, c.distributions()), 1e-14);
    }
    const auto rep = check_axioms_classical(m);
    EXPECT_TRUE(rep.all_pass());
    EXPECT_TRUE(rep.exhaustive);
    EXPECT_EQ(rep.find("lower_superadditive")->checked, disjoint_pairs(5));
  }
}

TEST(Envelope, DerivedInequalitiesHold) {
  Rng rng(3);
  for (unsigned n = 1; n <= 6; ++n)
    for (int t = 0; t < 10; ++t) {
      const auto m = envelope(random_credal_set(EventSpace(n), 4, rng));
      const auto rep = check_derived_inequalities(m);
      for (const auto& c : rep.checks) EXPECT_TRUE(c.pass) << c.name << " n=" << n << " margin " << c.worst_margin;
      EXPECT_EQ(rep.find("modular_inequality")->checked, std::size_t{1} << (2 * n));
    }
}

TEST(Envelope, FromLowerIsConjugate) {
  Rng rng(4);
  const auto m = envelope(random_credal_set(EventSpace(4), 3, rng));
  const auto c = ImpreciseMeasure::from_lower(m.space(), m.lower_values());
  for (Event a = 0; a <= m.space().full(); ++a) EXPECT_NEAR(c.upper(a), m.upper(a), 1e-15);
}

TEST(ClassicalAxioms, DetectConjugacyViolation) {
  const EventSpace s(2);
  auto m = ImpreciseMeasure::vacuous(s);
  auto lower = m.lower_values();
  lower[0b01] = 0.3;
  const ImpreciseMeasure bad(s, lower, m.upper_values());
  const auto rep = check_axioms_classical(bad);
  EXPECT_FALSE(rep.all_pass());
  const auto* c = rep.find("conjugacy");
  ASSERT_NE(c, nullptr);
  EXPECT_FALSE(c->pass);
  EXPECT_NEAR(c->worst_margin, -0.3, 1e-15);
  EXPECT_EQ(c->witness_a, 0b10u);
  EXPECT_TRUE(rep.find("lower_superadditive")->pass);
}

TEST(ClassicalAxioms, DetectSuperadditivityViolation) {
  const EventSpace s(2);
  const ImpreciseMeasure bad = ImpreciseMeasure::from_lower(s, {0.0, 0.6, 0.6, 1.0});
  const auto rep = check_axioms_classical(bad);
  const auto* c = rep.find("lower_superadditive");
  EXPECT_FALSE(c->pass);
  EXPECT_NEAR(c->worst_margin, -0.2, 1e-15);
  EXPECT_EQ(c->witness_a | c->witness_b, 0b11u);
}

TEST(ClassicalAxioms, SampledAboveTenOutcomes) {
  Rng rng(5);
  const auto m = envelope(random_credal_set(EventSpace(12), 3, rng));
  ClassicalCheckOptions opts;
  opts.samples = 2000;
  const auto rep = check_axioms_classical(m, opts);
  EXPECT_FALSE(rep.exhaustive);
  EXPECT_TRUE(rep.all_pass());
  EXPECT_EQ(rep.find("lower_superadditive")->checked, 2000u);
  const auto again = check_axioms_classical(m, opts);
  EXPECT_EQ(rep.find("upper_subadditive")->worst_margin, again.find("upper_subadditive")->worst_margin);
}

TEST(ClassicalAxioms, InvalidMeasureShapes) {
  const EventSpace s(2);
  EXPECT_EQ(code_of([&] { ImpreciseMeasure(s, {0, 0, 0}, {0, 0, 0, 1}); }), ErrorCode::InvalidMeasure);
  EXPECT_EQ(code_of([&] { ImpreciseMeasure(s, {0, 0, std::nan(""), 1}, {0, 1, 1, 1}); }), ErrorCode::InvalidMeasure);
}

TEST(ClassicalJoint, EqualsMeasureOfIntersection) {
  Rng rng(6);
  const EventSpace s(4);
  const auto c = random_credal_set(s, 5, rng);
  const auto m = envelope(c);
  for (Event a = 0; a <= s.full(); ++a)
    for (Event b = 0; b <= s.full(); ++b) {
      const auto j = classical_joint(m, a, b);
      EXPECT_NEAR(j.lower(), oracle::credal_lower(a & b, c.distributions()), 1e-14);
      EXPECT_NEAR(j.upper(), oracle::credal_upper(a & b, c.distributions()), 1e-14);
    }
  EXPECT_EQ(code_of([&] { classical_joint(m, 0b10000, 1); }), ErrorCode::InvalidArgument);
}

TEST(ClassicalJson, RoundTrip) {
  Rng rng(7);
  const auto c = random_credal_set(EventSpace(3), 2, rng);
  const auto m = envelope(c);
  const auto back = measure_from_json(Json::parse(to_json(m).dump()));
  EXPECT_EQ(back.lower_values(), m.lower_values());
  EXPECT_EQ(back.upper_values(), m.upper_values());
  const auto c2 = credal_from_json(Json::parse(to_json(c).dump()));
  EXPECT_EQ(c2.distributions(), c.distributions());
  EXPECT_EQ(code_of([] { measure_from_json(Json::parse(R"({"n": 2, "lower": [0, 0, 0, 1]})")); }),
            ErrorCode::MalformedInput);
  EXPECT_EQ(code_of([] { measure_from_json(Json::parse(R"({"n": 0, "lower": [], "upper": []})")); }),
            ErrorCode::InvalidMeasure);
}
