#pragma once

#include <optional>

#include "qfelab/games/schemes.hpp"
#include "qfelab/games/transcript.hpp"
#include "qfelab/haar.hpp"

namespace qfelab::games {

enum class World { real, ideal };
enum class Adaptivity { non_adaptive, adaptive };

struct SimMode {
  World world;
  Adaptivity adaptivity;
};

// Single-message, single-key-query adversary.
class SimAdversary {
 public:
  virtual ~SimAdversary() = default;
  // NA: the key query made before the challenge. AD adversaries return nullopt.
  virtual std::optional<CircuitId> query_before_challenge(SeededSampler& sampler) = 0;
  virtual Register choose_message(SeededSampler& sampler) = 0;
  // AD: the key query made after seeing the ciphertext. NA adversaries return nullopt.
  virtual std::optional<CircuitId> query_after_challenge(SeededSampler& sampler) = 0;
  // Final output register alpha.
  virtual Register output(const ToyQfe& scheme, const FunctionalKey& key, const QfeCiphertext& ct,
                          SeededSampler& sampler) = 0;
};

// Everything the ideal-world simulator is allowed to see: the circuit, its value on
// the message and the message length (plus the master key, which simulators may
// receive). Reading the message itself is a FirewallViolation.
class SimulatorView {
 public:
  SimulatorView(MasterKey mk, std::optional<CircuitId> circuit, std::optional<Register> evaluation,
                int message_qubits);

  const MasterKey& master_key() const { return mk_; }
  int message_qubits() const { return message_qubits_; }
  bool has_circuit() const { return circuit_.has_value(); }
  const CircuitId& circuit() const;
  const Register& evaluation() const;
  [[noreturn]] const Register& message() const;

 private:
  MasterKey mk_;
  std::optional<CircuitId> circuit_;
  std::optional<Register> evaluation_;
  int message_qubits_;
};

class QfeSimulator {
 public:
  virtual ~QfeSimulator() = default;
  // Sim (NA) or Sim_1 (AD): produce the challenge ciphertext.
  virtual QfeCiphertext simulate_ciphertext(const SimulatorView& view, SeededSampler& sampler) = 0;
  // Sim_2 (AD): answer a post-challenge key query.
  virtual FunctionalKey simulate_key(const SimulatorView& view, SeededSampler& sampler) = 0;
};

// Encrypts the evaluation C(m) under the master key; for the identity circuit on
// the toy scheme this reproduces the real ciphertext exactly.
class EchoEvaluationSimulator : public QfeSimulator {
 public:
  explicit EchoEvaluationSimulator(const ToyQfe& scheme) : scheme_(scheme) {}
  QfeCiphertext simulate_ciphertext(const SimulatorView& view, SeededSampler& sampler) override;
  FunctionalKey simulate_key(const SimulatorView& view, SeededSampler& sampler) override;

 private:
  const ToyQfe& scheme_;
};

// Fixed circuit, fixed message, measures alpha in the computational basis.
class FixedQueryAdversary : public SimAdversary {
 public:
  FixedQueryAdversary(CircuitId circuit, Register message, Adaptivity adaptivity);
  std::optional<CircuitId> query_before_challenge(SeededSampler& sampler) override;
  Register choose_message(SeededSampler& sampler) override;
  std::optional<CircuitId> query_after_challenge(SeededSampler& sampler) override;
  Register output(const ToyQfe& scheme, const FunctionalKey& key, const QfeCiphertext& ct,
                  SeededSampler& sampler) override;

 private:
  CircuitId circuit_;
  Register message_;
  Adaptivity adaptivity_;
};

// Runs one experiment. The transcript outcome is the low bit of a computational
// basis measurement of alpha. Throws ProtocolViolation on out-of-turn queries or
// oversized ciphertexts, FirewallViolation on simulator overreach.
Transcript run_sim_experiment(SimMode mode, const ToyQfe& scheme, SimAdversary& adversary,
                              QfeSimulator* simulator, const SeededSampler& sampler);

}  // namespace qfelab::games
