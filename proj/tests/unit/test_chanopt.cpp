#include <gtest/gtest.h>

#include "qfelab/chanopt.hpp"

using namespace qfelab;

TEST(Chanopt, RandomParamsAreIsometries) {
  SeededSampler s(1);
  const IsometryParams p = random_isometry_params(3, 2, s);
  EXPECT_LT(p.isometry_error(), 1e-10);
  EXPECT_EQ(p.comp_kraus().size(), std::size_t{1} << p.e1);
  EXPECT_EQ(p.decomp_kraus().front().rows(), 8);
}

TEST(Chanopt, PolarRetractionProducesIsometry) {
  SeededSampler s(2);
  Matrix v(6, 3);
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Complex(s.normal(), s.normal());
  const Matrix w = polar_retract(v);
  EXPECT_LT((w.adjoint() * w - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-10);
  // Already-isometric input is a fixed point.
  EXPECT_LT((polar_retract(w) - w).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Chanopt, ObjectiveMatchesChannelAverageFidelity) {
  SeededSampler s(3);
  for (int i = 0; i < 5; ++i) {
    const IsometryParams p = random_isometry_params(3, 1, s);
    EXPECT_NEAR(chanopt_objective(p), average_fidelity_exact(p.to_pair().composed()), 1e-12);
  }
}

TEST(Chanopt, GradientMatchesFiniteDifferences) {
  SeededSampler s(4);
  IsometryParams p = random_isometry_params(2, 1, s);
  const auto [ga, gb] = chanopt_gradient(p);
  const double h = 1e-6;
  for (int trial = 0; trial < 4; ++trial) {
    Matrix da(p.comp.rows(), p.comp.cols());
    Matrix db(p.decomp.rows(), p.decomp.cols());
    for (Eigen::Index i = 0; i < da.size(); ++i) da(i) = Complex(s.normal(), s.normal());
    for (Eigen::Index i = 0; i < db.size(); ++i) db(i) = Complex(s.normal(), s.normal());
    IsometryParams plus = p;
    IsometryParams minus = p;
    plus.comp += h * da;
    plus.decomp += h * db;
    minus.comp -= h * da;
    minus.decomp -= h * db;
    const double numeric = (chanopt_objective(plus) - chanopt_objective(minus)) / (2.0 * h);
    const double analytic = (ga.adjoint() * da).trace().real() + (gb.adjoint() * db).trace().real();
    EXPECT_NEAR(numeric, analytic, 1e-6);
  }
}

TEST(Chanopt, StaysBelowBoundAndReachesBaseline) {
  const OptimizationResult r = optimize_compression(2, 1, 200, 4, SeededSampler(5));
  EXPECT_LE(r.trace.best_favg, 0.6 + 1e-6);
  // The trace-out baseline already sits on the 4^{m-n} entanglement-fidelity ceiling.
  EXPECT_GE(r.trace.best_favg, 0.4 - 1e-4);
  EXPECT_NEAR(r.pair.average_fidelity(), r.trace.best_favg, 1e-9);
  EXPECT_LT(r.params.isometry_error(), 1e-9);
}

TEST(Chanopt, HistoriesAreMonotone) {
  const OptimizationResult r = optimize_compression(3, 2, 60, 2, SeededSampler(6));
  ASSERT_EQ(r.trace.restarts.size(), 2U);
  for (const RestartTrace& t : r.trace.restarts) {
    for (std::size_t i = 1; i < t.objective_history.size(); ++i) {
      EXPECT_GE(t.objective_history[i], t.objective_history[i - 1] - 1e-12);
    }
  }
}

TEST(Chanopt, DeterministicForSeed) {
  const std::string a = optimize_compression(2, 1, 40, 2, SeededSampler(7)).trace.to_csv();
  const std::string b = optimize_compression(2, 1, 40, 2, SeededSampler(7)).trace.to_csv();
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.rfind("# schema=1\nrestart,iteration,objective,n,m,favg_bound\n", 0), 0U);
}

TEST(Chanopt, Preconditions) {
  EXPECT_THROW(optimize_compression(2, 3, 10, 1, SeededSampler(1)), std::invalid_argument);
  EXPECT_THROW(optimize_compression(7, 1, 10, 1, SeededSampler(1)), std::invalid_argument);
  EXPECT_THROW(optimize_compression(2, 1, 10, 0, SeededSampler(1)), std::invalid_argument);
}
