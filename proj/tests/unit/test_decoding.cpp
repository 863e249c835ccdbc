#include <gtest/gtest.h>

#include <cmath>

#include "qfelab/games/decoding.hpp"

using namespace qfelab;
using namespace qfelab::games;

namespace {

Ensemble uniform(const std::vector<DensityOperator>& states) {
  Ensemble e;
  for (std::size_t i = 0; i < states.size(); ++i) {
    e.entries.push_back({i, states[i], 1.0 / static_cast<double>(states.size())});
  }
  return e;
}

}  // namespace

TEST(Pgm, OrthogonalStatesAreDecodedPerfectly) {
  std::vector<DensityOperator> states;
  for (std::uint64_t x = 0; x < 8; ++x) states.push_back(PureState::basis(3, x).density());
  EXPECT_NEAR(pgm_success(uniform(states)), 1.0, 1e-12);
}

TEST(Pgm, IdenticalStatesGiveHalf) {
  const DensityOperator rho = PureState::basis(1, 0).density();
  EXPECT_NEAR(pgm_success(uniform({rho, rho})), 0.5, 1e-12);
}

// For two equiprobable pure states the PGM is optimal, so it matches the
// Helstrom value 1/2 (1 + sqrt(1 - |<a|b>|^2)).
TEST(Pgm, TwoPureStatesMatchHelstrom) {
  SeededSampler s(1);
  for (int i = 0; i < 20; ++i) {
    const PureState a = sample_haar_state(2, s);
    const PureState b = sample_haar_state(2, s);
    const double overlap = std::norm(a.amplitudes().dot(b.amplitudes()));
    const double helstrom = 0.5 * (1.0 + std::sqrt(1.0 - overlap));
    EXPECT_NEAR(pgm_success(uniform({a.density(), b.density()})), helstrom, 1e-9);
  }
}

TEST(Pgm, NeverBeatsDimensionCount) {
  SeededSampler s(2);
  for (int i = 0; i < 20; ++i) {
    std::vector<DensityOperator> states;
    for (int k = 0; k < 4; ++k) states.push_back(sample_haar_state(1, s).density());
    EXPECT_LE(pgm_success(uniform(states)), 0.5 + 1e-9);
  }
}

TEST(Pgm, MeasureFollowsOutcomeProbabilities) {
  SeededSampler s(3);
  std::vector<DensityOperator> states;
  for (int k = 0; k < 3; ++k) states.push_back(sample_haar_state(1, s).density());
  const Ensemble e = uniform(states);
  const PrettyGoodMeasurement pgm(e);
  double total = 0.0;
  for (std::size_t i = 0; i < 3; ++i) total += pgm.outcome_probability(i, states[0]);
  EXPECT_NEAR(total, 1.0, 1e-9);
  const std::size_t trials = 20000;
  std::size_t hits = 0;
  for (std::size_t t = 0; t < trials; ++t) hits += pgm.measure(states[0], s) == 0 ? 1 : 0;
  const double p = pgm.outcome_probability(0, states[0]);
  EXPECT_NEAR(static_cast<double>(hits) / trials, p, 5.0 * std::sqrt(p * (1 - p) / trials));
}

TEST(Ensemble, Validation) {
  EXPECT_THROW(Ensemble{}.validate(), std::invalid_argument);
  Ensemble bad_prior = uniform({PureState::basis(1, 0).density()});
  bad_prior.entries[0].prior = 0.5;
  EXPECT_THROW(bad_prior.validate(), InvalidState);
  const Ensemble mixed_dims = uniform({PureState::basis(1, 0).density(), PureState::basis(2, 0).density()});
  EXPECT_THROW(mixed_dims.validate(), DimensionMismatch);
  EXPECT_THROW(pgm_success(mixed_dims), DimensionMismatch);
}

TEST(Bounds, GuessingAndNs06) {
  EXPECT_DOUBLE_EQ(guessing_upper_bound(16, 16), 1.0);
  EXPECT_DOUBLE_EQ(guessing_upper_bound(256, 4), 1.0 / 64.0);
  EXPECT_DOUBLE_EQ(guessing_upper_bound(2, 4), 1.0);
  EXPECT_THROW(guessing_upper_bound(0, 4), std::invalid_argument);
  EXPECT_DOUBLE_EQ(ns06_bound(8, 1.0), 4.0);
  EXPECT_DOUBLE_EQ(ns06_bound(8, 0.5), 3.5);
  EXPECT_LE(ns06_bound(8, std::pow(2.0, -20)), 0.0);
  EXPECT_THROW(ns06_bound(8, 0.0), std::invalid_argument);
  EXPECT_THROW(ns06_bound(8, 1.5), std::invalid_argument);
}

TEST(Compressors, PrefixKeepsLeadingBits) {
  const PrefixCompressor c(2);
  const DensityOperator rho = c.encode(0b1011'0000, 8);
  EXPECT_NEAR(rho.matrix()(2, 2).real(), 1.0, 1e-15);
  // Prefix ensemble: 2^p distinguishable classes of 2^{n-p} messages.
  EXPECT_NEAR(pgm_success(compressor_ensemble(c, 6)), 4.0 / 64.0, 1e-12);
}

TEST(Recovery, RespectsCap) {
  const HaarCodebookCompressor c(2, 5);
  const RecoveryEstimate r = recovery_experiment(c, 8, 2000, SeededSampler(6));
  EXPECT_DOUBLE_EQ(r.cap, 1.0 / 64.0);
  EXPECT_LE(r.exact, r.cap + 1e-9);
  EXPECT_LE(r.success, r.cap + 5.0 * r.std_error + 1e-12);
}

TEST(Recovery, FullBudgetRecoversEverything) {
  const PrefixCompressor c(4);
  const RecoveryEstimate r = recovery_experiment(c, 4, 200, SeededSampler(7));
  EXPECT_DOUBLE_EQ(r.success, 1.0);
  EXPECT_NEAR(r.exact, 1.0, 1e-12);
}
