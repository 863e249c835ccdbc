#pragma once

#include <cstdint>
#include <string>

#include "qfelab/channels.hpp"
#include "qfelab/core.hpp"
#include "qfelab/haar.hpp"

namespace qfelab {

struct PrsKey {
  // Throws std::invalid_argument unless 1 <= lambda <= 64; bits are reduced mod 2^lambda.
  PrsKey(std::uint64_t bits, int lambda);

  std::uint64_t bits;
  int lambda;
};

// f_k(x) = LSB(mix64(k XOR (x * 0x9E3779B97F4A7C15))). No security claim.
int prf_bit(const PrsKey& key, std::uint64_t x, int n);

// 2^{-n/2} sum_x (-1)^{phase(x)} |x>, phase bits given low-order first by x.
PureState binary_phase_state(int n, const std::vector<int>& phase_bits);

// Keyed binary-phase state generator standing in for PRS.Gen.
class PrsFamily {
 public:
  PrsFamily(int lambda, int n);

  int lambda() const { return lambda_; }
  int n() const { return n_; }
  // 2^lambda; throws if lambda = 64 (not enumerable).
  std::uint64_t key_count() const;

  PureState generate(const PrsKey& key) const;
  PureState generate(std::uint64_t key_bits) const { return generate(PrsKey(key_bits, lambda_)); }
  PrsKey random_key(SeededSampler& sampler) const;

 private:
  int lambda_;
  int n_;
};

// 1/2 (1 + Tr(rho sigma)).
double swap_test_accept_prob(const DensityOperator& rho, const DensityOperator& sigma);
// One Bernoulli draw of the swap test: 1 = accept.
int swap_test_sample(const DensityOperator& rho, const DensityOperator& sigma,
                     SeededSampler& sampler);

struct DistinguisherResult {
  int n = 0;
  int m = 0;
  int lambda = 0;
  std::size_t trials = 0;
  double win_prob = 0.0;
  double win_stderr = 0.0;
  double f_prs = 0.0;
  double f_prs_stderr = 0.0;
  double f_haar = 0.0;
  double f_haar_stderr = 0.0;

  // 1/2 + (f_prs - f_haar)/4
  double predicted_win() const { return 0.5 + (f_prs - f_haar) / 4.0; }
  // Standard error of win_prob - predicted_win().
  double combined_stderr() const;
  std::string to_csv() const;
};

// PRS-vs-Haar game: apply Decomp o Comp to one copy, swap-test against a fresh copy,
// guess "PRS" on accept. Trials alternate the hidden coin (b = trial mod 2).
DistinguisherResult distinguisher_advantage(const CompressorPair& pair, const PrsFamily& family,
                                            std::size_t trials, const SeededSampler& sampler);

}  // namespace qfelab
