#include "oracle.hpp"

#include <gtest/gtest.h>

using namespace iqprob;
using spin::Axis;

namespace {

const spin::SpinCatalog& s1() { return spin::spin1_catalog(); }

Matrix diag(std::initializer_list<double> d) {
  RealVector v(static_cast<Index>(d.size()));
  Index i = 0;
  for (double x : d) v(i++) = x;
  return v.cast<Complex>().asDiagonal();
}

Projector proj(const Matrix& m) { return Projector::from_computed(m); }

ProjectiveResolution resolution(const std::vector<Matrix>& ms) { return ProjectiveResolution::validate(ms); }

/// Rank-1 resolution from the columns of a unitary.
std::vector<Matrix> columns(const Matrix& u) {
  std::vector<Matrix> out;
  for (Index j = 0; j < u.cols(); ++j) out.push_back(u.col(j) * u.col(j).adjoint());
  return out;
}

std::string message_of(const std::function<void()>& f, ErrorCode expected) {
  try {
    f();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), expected);
    return e.what();
  }
  ADD_FAILURE() << "expected an iqprob::Error";
  return {};
}

}  // namespace

TEST(Resolution, AcceptsSpinResolutions) {
  for (auto a : spin::axes) {
    const auto r = s1().resolution(a);
    EXPECT_EQ(r.size(), 3u);
    EXPECT_EQ(r.dim(), 3);
  }
}

TEST(Resolution, RejectsIncompleteAndNear) {
  const auto incomplete = message_of([] { resolution({diag({1, 0}), diag({0, 0.5})}); }, ErrorCode::ResolutionInvalid);
  EXPECT_NE(incomplete.find("projector 1"), std::string::npos);
  const auto missing = message_of([] { resolution({diag({1, 0, 0}), diag({0, 1, 0})}); }, ErrorCode::ResolutionInvalid);
  EXPECT_NE(missing.find("not a resolution"), std::string::npos);
  Rng rng(1);
  const Matrix u = haar_unitary(3, rng);
  auto near = columns(u);
  const Matrix w = haar_unitary(3, rng);
  const double eps = 1e-8;
  Vector v = (u.col(0) + eps * w.col(0)).normalized();
  near[0] = v * v.adjoint();
  const auto msg = message_of([&] { resolution(near); }, ErrorCode::ResolutionInvalid);
  EXPECT_NE(msg.find("near-resolution"), std::string::npos) << msg;
  EXPECT_EQ(message_of([] { resolution({}); }, ErrorCode::ResolutionInvalid).empty(), false);
}

TEST(NoGo, CommutingResolutionsHaveNoDefect) {
  const auto p = resolution({diag({1, 1, 0, 0}), diag({0, 0, 1, 1})});
  const auto q = resolution({diag({1, 0, 1, 0}), diag({0, 1, 0, 1})});
  const auto c = no_go_certificate(p, q);
  EXPECT_LE(op_norm(c.defect), 1e-12);
  EXPECT_EQ(c.defect_rank, 0);
  EXPECT_FALSE(c.no_additive_joint);
  EXPECT_TRUE(c.forced_zero.empty());
  Rng rng(2);
  const auto rho = random_density_matrix(4, rng);
  for (std::size_t k = 0; k < 2; ++k)
    for (std::size_t i = 0; i < 2; ++i)
      EXPECT_NEAR(rho.expectation(c.pi[k][i].matrix()), rho.expectation(p[k].matrix() * q[i].matrix()), 1e-12);
}

TEST(NoGo, SpinXZIsMaximallyDefective) {
  const auto c = no_go_certificate(s1().resolution(Axis::X), s1().resolution(Axis::Z));
  EXPECT_LE(op_norm(c.defect - identity(3)), 1e-12);
  EXPECT_EQ(c.forced_zero.size(), 9u);
  EXPECT_EQ(c.defect_rank, 3);
  EXPECT_NEAR(c.trace_defect, 3.0, 1e-12);
  EXPECT_TRUE(c.no_additive_joint);
  for (double v : c.defect_spectrum) EXPECT_NEAR(v, 1.0, 1e-12);
}

TEST(NoGo, SharedEigenvectorLeavesRankThree) {
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    const Matrix u = haar_unitary(4, rng);
    const Matrix rest = u.rightCols(3);
    Matrix a(4, 4), b(4, 4);
    a.col(0) = b.col(0) = u.col(0);
    a.rightCols(3) = rest * haar_unitary(3, rng);
    b.rightCols(3) = rest * haar_unitary(3, rng);
    const auto c = no_go_certificate(resolution(columns(a)), resolution(columns(b)));
    EXPECT_EQ(c.defect_rank, 3);
    const Matrix expected = identity(4) - u.col(0) * u.col(0).adjoint();
    EXPECT_LE(op_norm(c.defect - expected), 1e-9);
    EXPECT_EQ(c.forced_zero.size(), 15u);
    const auto ev = eigh(HermitianOperator::hermitian_part(c.defect)).values;
    EXPECT_NEAR(ev(0), 0.0, 1e-9);
    for (Index i = 1; i < 4; ++i) EXPECT_NEAR(ev(i), 1.0, 1e-9);
  }
}

TEST(NoGo, DimensionMismatch) {
  const auto p = resolution({diag({1, 0}), diag({0, 1})});
  EXPECT_THROW(no_go_certificate(p, s1().resolution(Axis::Z)), Error);
}

TEST(TwoTime, MixedSpinState) {
  const auto rho = DensityMatrix::validate(identity(3) / 3.0);
  const auto& p = s1().projector(Axis::X, 1);
  const auto& q = s1().projector(Axis::Z, 1);
  EXPECT_NEAR(two_time_probability(rho, p, q, MeasurementOrder::PQ), 1.0 / 12.0, 1e-12);
  EXPECT_NEAR(two_time_probability(rho, p, q, MeasurementOrder::QP), 1.0 / 12.0, 1e-12);
}

TEST(TwoTime, CommutingOrdersAgree) {
  Rng rng(4);
  const Matrix pm = diag({1, 1, 0, 0}), qm = diag({0, 1, 1, 0});
  const auto p = proj(pm), q = proj(qm);
  for (int t = 0; t < 20; ++t) {
    const auto rho = random_commuting_state(p, rng);
    const double joint = rho.expectation(pm * qm);
    EXPECT_NEAR(two_time_probability(rho, p, q, MeasurementOrder::PQ), joint, 1e-12);
    EXPECT_NEAR(two_time_probability(rho, p, q, MeasurementOrder::QP), joint, 1e-12);
    EXPECT_NEAR(two_time_mean(rho, p, q), joint, 1e-12);
  }
}

TEST(TwoTime, OrderMattersForGenericPairs) {
  Rng rng(5);
  int differ = 0;
  for (int t = 0; t < 20; ++t) {
    const auto p = random_projector(3, 1, rng);
    const auto q = random_projector(3, 1, rng);
    const auto rho = random_density_matrix(3, rng);
    const double a = two_time_probability(rho, p, q, MeasurementOrder::PQ);
    const double b = two_time_probability(rho, p, q, MeasurementOrder::QP);
    EXPECT_NEAR(a, (q.matrix() * p.matrix() * rho.matrix() * p.matrix()).trace().real(), 1e-14);
    if (std::abs(a - b) > 1e-6) ++differ;
  }
  EXPECT_GT(differ, 15);
}

TEST(TwoTimeMean, IdentityGivesMarginal) {
  Rng rng(6);
  const auto p = random_projector(4, 2, rng);
  const auto rho = random_density_matrix(4, rng);
  EXPECT_NEAR(two_time_mean(rho, p, Projector::identity(4)), rho.expectation(p.matrix()), 1e-12);
}

TEST(TwoTimeMean, ExcessOverJointOnCommutingStates) {
  Rng rng(7);
  for (int t = 0; t < 100; ++t) {
    const auto p = random_projector(4, rng);
    const auto q = random_projector(4, rng);
    const auto rho = random_commuting_state(p, rng);
    const Matrix &pm = p.matrix(), &qm = q.matrix();
    const double joint = rho.expectation(pm * qm);
    const double expected = (rho.expectation(qm * pm * qm) - joint) / 2.0;
    EXPECT_NEAR(two_time_mean(rho, p, q) - joint, expected, 1e-12);
  }
}

TEST(MeanIncompatibility, BothSignsWitnessed) {
  const auto r = find_mean_incompatibility(0, 10000);
  ASSERT_TRUE(r.above.has_value());
  ASSERT_TRUE(r.below.has_value());
  EXPECT_LE(r.trials_above, 10000u);
  EXPECT_LE(r.trials_below, 10000u);
  for (const auto* w : {&*r.above, &*r.below}) {
    EXPECT_LE(op_norm(commutator(w->rho, w->p)), 1e-10);
    const Matrix sym = (w->p * w->q * w->p + w->q * w->p * w->q) / 2.0;
    EXPECT_NEAR(w->mean, real_trace(w->rho * sym), 1e-12);
    EXPECT_NEAR(w->joint, real_trace(w->rho * w->p * w->q), 1e-12);
  }
  EXPECT_GT(r.above->mean - r.above->joint, 1e-6);
  EXPECT_GT(r.below->joint - r.below->mean, 1e-6);
}

TEST(MarginalDefect, CommutingResolutionsAreExact) {
  Rng rng(8);
  const auto p = resolution({diag({1, 1, 0, 0}), diag({0, 0, 1, 1})});
  const auto q = resolution({diag({1, 0, 1, 0}), diag({0, 1, 0, 1})});
  const auto d = marginal_defect(random_density_matrix(4, rng), p, q);
  EXPECT_TRUE(d.first_exact);
  EXPECT_LE(d.max_first, 1e-12);
  EXPECT_LE(d.max_second, 1e-12);
}

TEST(MarginalDefect, SpinYStateOnXThenZ) {
  const auto rho = DensityMatrix::validate(s1().projector(Axis::Y, 1).matrix());
  const auto px = s1().resolution(Axis::X), pz = s1().resolution(Axis::Z);
  const auto d = marginal_defect(rho, px, pz);
  EXPECT_TRUE(d.first_exact);
  EXPECT_GT(d.max_second, 0.01);
  const Matrix& r = rho.matrix();
  for (std::size_t i = 0; i < 3; ++i) {
    Matrix after = zeros(3);
    for (std::size_t k = 0; k < 3; ++k) after += px[k].matrix() * r * px[k].matrix();
    const double expected = std::abs(real_trace(after * pz[i].matrix()) - real_trace(r * pz[i].matrix()));
    EXPECT_NEAR(d.second[i], expected, 1e-12);
  }
  EXPECT_NEAR(d.second[0], 0.125, 1e-12);
  EXPECT_NEAR(d.second[1], 0.25, 1e-12);
  EXPECT_NEAR(d.second[2], 0.125, 1e-12);
}

TEST(MarginalDefect, FirstMarginalAlwaysExact) {
  Rng rng(9);
  for (int t = 0; t < 50; ++t) {
    const Index n = 2 + t % 5;
    const auto p = resolution(columns(haar_unitary(n, rng)));
    const auto q = resolution(columns(haar_unitary(n, rng)));
    EXPECT_TRUE(marginal_defect(random_density_matrix(n, rng), p, q).first_exact);
  }
}
