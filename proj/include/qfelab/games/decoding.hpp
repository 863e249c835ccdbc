#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "qfelab/core.hpp"
#include "qfelab/haar.hpp"

namespace qfelab::games {

struct EnsembleEntry {
  std::uint64_t label;
  DensityOperator state;
  double prior;
};

struct Ensemble {
  std::vector<EnsembleEntry> entries;

  // Throws InvalidState unless priors sum to 1 and DimensionMismatch unless dims agree.
  void validate() const;
  std::size_t dim() const;
};

// Pretty good measurement E_i = p_i S^{-1/2} rho_i S^{-1/2}, S = sum p_i rho_i.
class PrettyGoodMeasurement {
 public:
  explicit PrettyGoodMeasurement(const Ensemble& ensemble);

  // Probability that the measurement answers entry `i` when the input is rho.
  double outcome_probability(std::size_t i, const DensityOperator& rho) const;
  // Samples an outcome index for input rho.
  std::size_t measure(const DensityOperator& rho, SeededSampler& sampler) const;
  // sum_i p_i Tr(E_i rho_i)
  double success_probability() const;

 private:
  std::vector<Matrix> elements_;
  std::vector<double> priors_;
  std::vector<Matrix> states_;
};

double pgm_success(const Ensemble& ensemble);

// min(1, K/N): no measurement on a K-dimensional system identifies one of N
// equiprobable messages with higher probability.
double guessing_upper_bound(std::uint64_t messages, std::uint64_t dim);

// Communication lower bound m_A >= (n - log2(1/p)) / 2.
double ns06_bound(double n_bits, double success_probability);

// Maps an n-bit message to a state on `qubits()` qubits with no access to
// anything but the message. Stands in for a simulator whose output register has
// a fixed qubit budget p.
class MessageCompressor {
 public:
  virtual ~MessageCompressor() = default;
  virtual int qubits() const = 0;
  virtual DensityOperator encode(std::uint64_t message, int message_bits) const = 0;
  virtual std::string name() const = 0;
};

// Keeps the first p bits (most significant first) in the computational basis.
class PrefixCompressor : public MessageCompressor {
 public:
  explicit PrefixCompressor(int qubits);
  int qubits() const override { return p_; }
  DensityOperator encode(std::uint64_t message, int message_bits) const override;
  std::string name() const override { return "prefix"; }

 private:
  int p_;
};

// Each message gets an independent Haar state seeded by (seed, message).
class HaarCodebookCompressor : public MessageCompressor {
 public:
  HaarCodebookCompressor(int qubits, std::uint64_t seed);
  int qubits() const override { return p_; }
  DensityOperator encode(std::uint64_t message, int message_bits) const override;
  std::string name() const override { return "haar-codebook"; }

 private:
  int p_;
  std::uint64_t seed_;
};

// Uniform ensemble {compressor.encode(x)} over all x in {0,1}^message_bits.
Ensemble compressor_ensemble(const MessageCompressor& compressor, int message_bits);

struct RecoveryEstimate {
  std::size_t trials = 0;
  double success = 0.0;
  double std_error = 0.0;
  double exact = 0.0;  // pgm_success of the ensemble
  double cap = 0.0;    // guessing_upper_bound(2^n, 2^p)
};

// Draws uniform messages, encodes them, decodes with the ensemble PGM and counts
// exact full recoveries.
RecoveryEstimate recovery_experiment(const MessageCompressor& compressor, int message_bits,
                                     std::size_t trials, const SeededSampler& sampler);

}  // namespace qfelab::games
