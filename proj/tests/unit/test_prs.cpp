#include <gtest/gtest.h>

#include <cmath>

#include "qfelab/hash.hpp"
#include "qfelab/prs.hpp"

using namespace qfelab;

TEST(Hash, FrozenValues) {
  // splitmix64 finalizer of 1.
  EXPECT_EQ(mix64(1), 625666341681347298ULL);
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(Prf, FrozenBitAndRange) {
  EXPECT_EQ(prf_bit(PrsKey(1, 8), 0, 3), 0);
  int ones = 0;
  for (std::uint64_t x = 0; x < 1024; ++x) ones += prf_bit(PrsKey(12345, 16), x, 10);
  EXPECT_GT(ones, 400);
  EXPECT_LT(ones, 624);
  EXPECT_THROW(PrsKey(0, 0), std::invalid_argument);
  EXPECT_THROW(PrsKey(0, 65), std::invalid_argument);
  EXPECT_EQ(PrsKey(0x1FF, 8).bits, 0xFFU);
}

TEST(Prs, BinaryPhaseState) {
  const PureState psi = binary_phase_state(2, {0, 1, 1, 0});
  EXPECT_NEAR(psi.amplitudes()(0).real(), 0.5, 1e-15);
  EXPECT_NEAR(psi.amplitudes()(1).real(), -0.5, 1e-15);
  EXPECT_NEAR(psi.amplitudes()(3).real(), 0.5, 1e-15);
  EXPECT_THROW(binary_phase_state(2, {0, 1}), std::invalid_argument);
}

TEST(Prs, FamilyIsDeterministicAndDistinct) {
  const PrsFamily family(8, 4);
  EXPECT_EQ(family.key_count(), 256U);
  const PureState a = family.generate(3);
  EXPECT_TRUE(a.amplitudes().isApprox(family.generate(3).amplitudes(), 0.0));
  EXPECT_LT(fidelity(a, family.generate(4)), 1.0 - 1e-9);
  EXPECT_THROW(family.generate(PrsKey(3, 7)), std::invalid_argument);
}

TEST(SwapTest, AcceptanceFormula) {
  const DensityOperator zero = PureState::basis(1, 0).density();
  EXPECT_NEAR(swap_test_accept_prob(zero, zero), 1.0, 1e-15);
  EXPECT_NEAR(swap_test_accept_prob(zero, PureState::basis(1, 1).density()), 0.5, 1e-15);
  EXPECT_NEAR(swap_test_accept_prob(zero, DensityOperator::maximally_mixed(1)), 0.75, 1e-15);
  SeededSampler s(1);
  int accepts = 0;
  for (int i = 0; i < 4000; ++i) accepts += swap_test_sample(zero, DensityOperator::maximally_mixed(1), s);
  EXPECT_NEAR(accepts / 4000.0, 0.75, 5.0 * std::sqrt(0.75 * 0.25 / 4000.0));
}

TEST(Distinguisher, IdentityFixtureIsExactlyHalf) {
  const PrsFamily family(8, 3);
  const CompressorPair id{KrausChannel::identity(3), KrausChannel::identity(3)};
  const DistinguisherResult r = distinguisher_advantage(id, family, 2000, SeededSampler(2));
  EXPECT_DOUBLE_EQ(r.f_prs, 1.0);
  EXPECT_DOUBLE_EQ(r.f_haar, 1.0);
  EXPECT_DOUBLE_EQ(r.win_prob, 0.5);
}

TEST(Distinguisher, WinMatchesSwapTestAlgebra) {
  const PrsFamily family(2, 4);
  const CompressorPair pair = make_compressor(CompressorKind::keyed, 4, 2, &family);
  const DistinguisherResult r = distinguisher_advantage(pair, family, 8000, SeededSampler(3));
  EXPECT_NEAR(r.win_prob, r.predicted_win(), 5.0 * r.combined_stderr());
  EXPECT_GT(r.win_prob, 0.65);
  EXPECT_EQ(r.to_csv().rfind("# schema=1\nn,m,lambda,trials,f_prs,f_haar,win_prob,stderr\n", 0), 0U);
}

TEST(Distinguisher, TraceOutIsNearHalf) {
  const PrsFamily family(32, 6);
  const CompressorPair pair = make_compressor(CompressorKind::trace_out, 6, 5);
  const DistinguisherResult r = distinguisher_advantage(pair, family, 4000, SeededSampler(4));
  EXPECT_NEAR(r.win_prob, 0.5, 5.0 * r.win_stderr);
  EXPECT_LE(r.f_prs, incompressibility_bound(6, 5).favg_bound + 5.0 * r.f_prs_stderr);
}
