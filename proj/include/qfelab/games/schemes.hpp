#pragma once

// Toy, deliberately insecure stand-ins for QFE and PKE. The security games only
// need correctness and declared size bounds from them.

#include <cstdint>
#include <string>
#include <variant>

#include "qfelab/channels.hpp"
#include "qfelab/core.hpp"
#include "qfelab/haar.hpp"

namespace qfelab::games {

inline constexpr int kToyLambda = 16;

// Classical value held in a computational-basis register of `width` qubits.
struct BasisRegister {
  std::uint64_t label = 0;
  int width = 0;

  bool operator==(const BasisRegister&) const = default;
};

using Register = std::variant<BasisRegister, DensityOperator>;

int register_qubits(const Register& reg);
// |label><label| for basis registers (width <= 12).
DensityOperator as_density(const Register& reg);
// Stable textual form used as a transcript payload.
std::string describe(const Register& reg);

struct CircuitId {
  enum class Kind { identity, pke_enc, prs_gen };

  Kind kind = Kind::identity;
  std::uint64_t public_key = 0;
  int prs_lambda = 0;
  int prs_n = 0;

  static CircuitId identity() { return {}; }
  static CircuitId pke_enc(std::uint64_t pk) { return {Kind::pke_enc, pk, 0, 0}; }
  static CircuitId prs_gen(int lambda, int n) { return {Kind::prs_gen, 0, lambda, n}; }

  std::string to_string() const;
  bool operator==(const CircuitId&) const = default;
};

// ---------------------------------------------------------------- toy PKE

struct PkeKeyPair {
  std::uint64_t secret_key;
  std::uint64_t public_key;
};

// Ciphertext = (32-bit nonce, message XOR keystream(pk, nonce)) packed as
// nonce << message_bits | body. Anyone holding pk can decrypt.
class ToyPke {
 public:
  static constexpr int kNonceBits = 32;

  explicit ToyPke(int message_bits = kToyLambda);

  int message_bits() const { return message_bits_; }
  int ciphertext_bits() const { return message_bits_ + kNonceBits; }
  std::uint64_t message_mask() const;

  static std::uint64_t public_key_of(std::uint64_t secret_key);

  PkeKeyPair gen(SeededSampler& sampler) const;
  BasisRegister enc(std::uint64_t pk, std::uint64_t message, SeededSampler& sampler) const;
  BasisRegister enc_with_nonce(std::uint64_t pk, std::uint64_t message, std::uint64_t nonce) const;
  std::uint64_t dec(std::uint64_t sk, const BasisRegister& ct) const;
  std::uint64_t decrypt_with_public_key(std::uint64_t pk, const BasisRegister& ct) const;

 private:
  int message_bits_;
};

// Circuit semantics. pke_enc is the derandomized PKE.Enc(pk, .) with the nonce
// derived from (pk, message); prs_gen maps a basis key to its family state.
Register evaluate_circuit(const CircuitId& circuit, const Register& input);

// ---------------------------------------------------------------- toy QFE

struct MasterKey {
  std::uint64_t seed = 0;
};

struct FunctionalKey {
  std::uint64_t seed = 0;
  CircuitId circuit;
};

struct QfeCiphertext {
  Register body;
};

// Enc applies a seed-derived permutation-with-phases unitary to the message
// register; Dec inverts it and applies the circuit.
class ToyQfe {
 public:
  explicit ToyQfe(int lambda = kToyLambda, int ciphertext_bound = kToyLambda);

  int lambda() const { return lambda_; }
  // q(lambda): ciphertext size bound in qubits.
  int ciphertext_bound() const { return ciphertext_bound_; }
  // Functional keys are a 64-bit seed plus the public circuit id.
  int functional_key_qubits() const { return 64; }
  // 2 q + lambda with q the functional-key size.
  int proof_message_count() const { return 2 * functional_key_qubits() + lambda_; }

  MasterKey setup(SeededSampler& sampler) const;
  FunctionalKey keygen(const MasterKey& mk, const CircuitId& circuit) const;
  // Throws ProtocolViolation if the ciphertext would exceed the declared bound.
  QfeCiphertext enc(const MasterKey& mk, const Register& message) const;
  Register dec(const FunctionalKey& fk, const QfeCiphertext& ct) const;

  // Dense form of the encryption unitary on `width` qubits.
  static Matrix encryption_unitary(std::uint64_t seed, int width);

 private:
  int lambda_;
  int ciphertext_bound_;
};

// Succinct stub: Enc discards s - t qubits and scrambles the rest with a
// seed-derived unitary; Dec unscrambles and pads with |0>. Only correct on
// messages supported on the kept qubits, which is the point.
class SuccinctQfeStub {
 public:
  SuccinctQfeStub(int message_qubits, int ciphertext_qubits, std::uint64_t seed);

  int message_qubits() const { return s_; }
  int ciphertext_qubits() const { return t_; }
  bool succinct() const { return t_ < s_; }

  KrausChannel enc_channel() const;
  KrausChannel dec_channel(const CircuitId& circuit) const;

 private:
  int s_;
  int t_;
  Matrix scramble_;
};

}  // namespace qfelab::games
