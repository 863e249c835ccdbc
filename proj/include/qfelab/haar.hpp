#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qfelab/core.hpp"

namespace qfelab {

class KrausChannel;

// Deterministic random source identified by (seed, stream_index).
// Loops that need per-item randomness call child(i) so results do not depend
// on iteration order or worker count.
class SeededSampler {
 public:
  explicit SeededSampler(std::uint64_t seed, std::uint64_t stream_index = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_index() const { return stream_index_; }
  // Single fingerprint of (seed, stream_index), recorded in transcripts.
  std::uint64_t id() const;

  SeededSampler child(std::uint64_t index) const;

  std::mt19937_64& engine() { return engine_; }
  std::uint64_t bits() { return engine_(); }
  double uniform();
  double normal();
  bool bernoulli(double p);
  // Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_index_;
  std::mt19937_64 engine_;
};

PureState sample_haar_state(int qubits, SeededSampler& sampler);
// Haar unitary on `qubits` qubits (QR of a Ginibre matrix with R-diagonal phase fix).
Matrix sample_haar_unitary(int qubits, SeededSampler& sampler);
// Same construction for an arbitrary dimension, used for isometry fixtures.
Matrix sample_haar_unitary_dim(std::size_t dim, SeededSampler& sampler);

inline constexpr double kLevyConstant = 1.0 / (18.0 * 3.14159265358979323846 *
                                               3.14159265358979323846 *
                                               3.14159265358979323846);

// 2 exp(-2 C (r+1) eps^2 / eta^2) with C = 1/(18 pi^3).
double levy_tail_bound(double epsilon, double sphere_dim, double lipschitz);

// Lipschitz constant used for f(psi) = <psi|Phi(psi)|psi>.
inline constexpr double kSelfFidelityLipschitz = 4.0;

struct TailEntry {
  double epsilon;
  double tail_frequency;
  double levy_bound;
};

struct ConcentrationReport {
  int n = 0;
  std::size_t samples = 0;
  double empirical_mean = 0.0;
  double empirical_std = 0.0;
  // Exact Haar average, the centre used for tail counting.
  double exact_mean = 0.0;
  std::vector<TailEntry> tails;

  bool within_levy_bound() const;
  std::string to_csv() const;
};

// Samples f(psi) = <psi|Phi(|psi><psi|)|psi> over Haar psi. Throws InvariantViolation
// if a measured tail exceeds the Levy bound.
ConcentrationReport concentration_experiment(const KrausChannel& channel, std::size_t samples,
                                             const std::vector<double>& epsilons,
                                             const SeededSampler& sampler);

}  // namespace qfelab
