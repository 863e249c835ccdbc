#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qfelab/channels.hpp"
#include "qfelab/games/cpa.hpp"
#include "qfelab/games/decoding.hpp"
#include "qfelab/games/schemes.hpp"
#include "qfelab/prs.hpp"

namespace qfelab::games {

// Many-message attack with one adaptive identity-key query.
// Real mode (simulator == nullptr): encrypts n random bits, decrypts each with
// fk_I and checks it by a gentle projective measurement; outputs 1 iff all match.
// Ideal mode: the simulator's key register is modelled by `simulator`, and the
// outcome is 1 iff the PGM decoder recovers all n bits from it.
int attack_m1ad(const ToyQfe& scheme, int n, const MessageCompressor* simulator,
                SeededSampler& sampler);

// Sum over the n checks of 2 sqrt(1 - p_i); zero on a correct scheme.
double m1ad_disturbance(const ToyQfe& scheme, int n, SeededSampler& sampler);

// The simulator of the single-message many-key experiment. Receives V only.
struct MultiKeyView {
  MasterKey master_key;
  std::vector<CircuitId> circuits;
  std::vector<BasisRegister> evaluations;
  int message_bits = 0;
};

class MultiKeySimulator {
 public:
  virtual ~MultiKeySimulator() = default;
  virtual QfeCiphertext simulate(const ToyQfe& scheme, const MultiKeyView& view,
                                 SeededSampler& sampler) = 0;
};

// Emits a basis register one qubit over the scheme's ciphertext bound.
class OversizedSimulator : public MultiKeySimulator {
 public:
  QfeCiphertext simulate(const ToyQfe& scheme, const MultiKeyView& view, SeededSampler&) override;
};

// Opens the first evaluation with its public key (the toy PKE weakness) and
// encrypts the result honestly.
class PkeWeaknessSimulator : public MultiKeySimulator {
 public:
  explicit PkeWeaknessSimulator(const ToyPke& pke) : pke_(pke) {}
  QfeCiphertext simulate(const ToyQfe& scheme, const MultiKeyView& view, SeededSampler&) override;

 private:
  const ToyPke& pke_;
};

// The MK-CPA adversary built from a QFE scheme. With a null simulator it runs
// the real experiment in step 10 (the modified algorithm).
class OneMnaAdversary : public CpaAdversary {
 public:
  OneMnaAdversary(const ToyQfe& qfe, MultiKeySimulator* simulator, std::size_t n);

  std::size_t announce_keys(SeededSampler&) override { return n_; }
  std::vector<MessagePair> choose_messages(const ToyPke& pke, const CpaView& view,
                                           SeededSampler& sampler) override;
  int guess(const ToyPke& pke, const CpaView& view, const std::vector<BasisRegister>& cts,
            SeededSampler& sampler) override;

  // Whether the last guess came from the oversized-ciphertext branch.
  bool took_bottom_branch() const { return bottom_; }
  std::size_t trap_index() const { return trap_; }

 private:
  const ToyQfe& qfe_;
  MultiKeySimulator* simulator_;
  std::size_t n_;
  std::uint64_t shared_message_ = 0;
  std::vector<PkeKeyPair> fresh_keys_;
  std::size_t trap_ = 0;
  bool bottom_ = false;
};

struct OneMnaRun {
  int challenge_bit = 0;
  int guess = 0;
  bool bottom = false;
  Transcript transcript;
};

// Runs the attack inside the MK-CPA experiment with hidden bit `challenge_bit`.
OneMnaRun attack_1mna(const ToyQfe& qfe, const ToyPke& pke, MultiKeySimulator* simulator,
                      std::size_t n, int challenge_bit, const SeededSampler& sampler);

// b = 1 framing: a simulator whose ciphertext has `qubits` qubits compresses n
// independent random bits; recovering all of them is capped by 2^q / 2^n.
RecoveryEstimate attack_1mna_recovery(const MessageCompressor& simulator, int message_bits,
                                      std::size_t trials, const SeededSampler& sampler);

// Comp = the stub's encryption (what a simulator would have to output),
// Decomp = its decryption under the identity key.
CompressorPair simulator_as_compressor(const SuccinctQfeStub& qfe, const PrsFamily& family);

struct SimCompressorReport {
  int s = 0;
  int t = 0;
  std::size_t samples = 0;
  double f_prs = 0.0;
  double f_prs_stderr = 0.0;
  double favg_bound = 0.0;
  double swap_reject = 0.0;
  double swap_reject_stderr = 0.0;

  // Correctness would need f_prs >= 1 - 1e-6.
  bool impossibility_confirmed() const { return f_prs < 1.0 - 1e-6; }
  std::string summary() const;
  std::string to_csv() const;
};

SimCompressorReport sim_compressor_experiment(const SuccinctQfeStub& qfe, const PrsFamily& family,
                                              std::size_t samples, const SeededSampler& sampler);

}  // namespace qfelab::games
