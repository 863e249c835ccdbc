#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qfelab/games/schemes.hpp"
#include "qfelab/games/transcript.hpp"
#include "qfelab/haar.hpp"

namespace qfelab::games {

// Seed layout shared by every CPA-style experiment, so that runs over the same
// root sampler line up event for event:
//   root.child(kKeygenStreams).child(i)  key generation for slot i (1-indexed)
//   root.child(kEncStreams).child(i)     encryption randomness for slot i
//   root.child(kCoinStream)              the hidden bit b
//   root.child(kAdversaryStream)         the adversary's own coins
enum CpaStream : std::uint64_t {
  kKeygenStreams = 0,
  kEncStreams = 1,
  kCoinStream = 2,
  kAdversaryStream = 3,
};

struct MessagePair {
  std::uint64_t m0;
  std::uint64_t m1;
};

struct CpaView {
  std::vector<std::uint64_t> public_keys;
  // Filled only when the test hook leaking secret keys is enabled.
  std::vector<std::uint64_t> leaked_secret_keys;
};

class CpaAdversary {
 public:
  virtual ~CpaAdversary() = default;
  // MK-CPA step 1: number of key pairs. Not called in the single-key game.
  virtual std::size_t announce_keys(SeededSampler& sampler) = 0;
  virtual std::vector<MessagePair> choose_messages(const ToyPke& pke, const CpaView& view,
                                                   SeededSampler& sampler) = 0;
  virtual int guess(const ToyPke& pke, const CpaView& view, const std::vector<BasisRegister>& cts,
                    SeededSampler& sampler) = 0;
};

// One key slot of a CPA challenger: key generation and challenge encryption.
class CpaChallenger {
 public:
  CpaChallenger(const ToyPke& pke, const SeededSampler& root, std::size_t slot);

  std::uint64_t public_key() const { return keys_.public_key; }
  std::uint64_t secret_key() const { return keys_.secret_key; }
  std::uint64_t keygen_stream() const { return keygen_id_; }
  std::uint64_t enc_stream() const { return enc_rng_.id(); }
  BasisRegister challenge(const MessagePair& pair, int bit);

 private:
  const ToyPke& pke_;
  PkeKeyPair keys_;
  std::uint64_t keygen_id_;
  SeededSampler enc_rng_;
};

struct CpaOptions {
  // Pins the hidden bit instead of drawing it from the coin stream.
  std::optional<int> forced_bit;
  // Test hook: hand the secret keys to the adversary.
  bool leak_secret_keys = false;
  // Key slot used by the single-key game (the reduction embeds its challenge here).
  std::size_t key_slot = 1;
};

// Outcome 1 iff b == b'.
Transcript run_cpa(const ToyPke& pke, CpaAdversary& adversary, const SeededSampler& sampler,
                   const CpaOptions& options = {});
Transcript run_mk_cpa(const ToyPke& pke, CpaAdversary& adversary, const SeededSampler& sampler,
                      const CpaOptions& options = {});

// H_j: ct_i encrypts m_{1,i} for i < j and m_{0,i} for i >= j. Outcome = b'.
Transcript hybrid_h(std::size_t j, const ToyPke& pke, CpaAdversary& adversary,
                    const SeededSampler& sampler);

struct ReductionRun {
  Transcript outer;  // D against its CPA challenger
  Transcript inner;  // the MK-CPA experiment D simulates for the adversary
  int guess = 0;     // D's output bit
};

// D embeds its CPA challenge at slot j and plays the MK-CPA challenger for the
// other slots: slots i < j get m_{1,i}, slots i > j get m_{0,i}.
ReductionRun reduction_d(const ToyPke& pke, CpaAdversary& adversary, std::size_t j,
                         int challenge_bit, const SeededSampler& sampler);

// ------------------------------------------------------------- adversaries

class ConstantAdversary : public CpaAdversary {
 public:
  ConstantAdversary(int bit, std::size_t keys = 1) : bit_(bit), keys_(keys) {}
  std::size_t announce_keys(SeededSampler&) override { return keys_; }
  std::vector<MessagePair> choose_messages(const ToyPke& pke, const CpaView& view,
                                           SeededSampler& sampler) override;
  int guess(const ToyPke&, const CpaView&, const std::vector<BasisRegister>&, SeededSampler&) override {
    return bit_;
  }

 private:
  int bit_;
  std::size_t keys_;
};

// Decrypts slot 0 with the leaked secret key.
class SecretKeyOracleAdversary : public CpaAdversary {
 public:
  std::size_t announce_keys(SeededSampler&) override { return 1; }
  std::vector<MessagePair> choose_messages(const ToyPke& pke, const CpaView& view,
                                           SeededSampler& sampler) override;
  int guess(const ToyPke& pke, const CpaView& view, const std::vector<BasisRegister>& cts,
            SeededSampler& sampler) override;
};

// Exploits the toy scheme: the keystream depends only on pk.
class PublicKeyDecryptAdversary : public CpaAdversary {
 public:
  explicit PublicKeyDecryptAdversary(std::size_t keys = 1) : keys_(keys) {}
  std::size_t announce_keys(SeededSampler&) override { return keys_; }
  std::vector<MessagePair> choose_messages(const ToyPke& pke, const CpaView& view,
                                           SeededSampler& sampler) override;
  int guess(const ToyPke& pke, const CpaView& view, const std::vector<BasisRegister>& cts,
            SeededSampler& sampler) override;

 private:
  std::size_t keys_;
};

// m_{0,i} = m_{1,i}; the guess is a fresh coin.
class EqualMessagesAdversary : public CpaAdversary {
 public:
  explicit EqualMessagesAdversary(std::size_t keys = 1) : keys_(keys) {}
  std::size_t announce_keys(SeededSampler&) override { return keys_; }
  std::vector<MessagePair> choose_messages(const ToyPke& pke, const CpaView& view,
                                           SeededSampler& sampler) override;
  int guess(const ToyPke&, const CpaView&, const std::vector<BasisRegister>&,
            SeededSampler& sampler) override;

 private:
  std::size_t keys_;
};

// Outputs 1 with probability (#slots decrypting to m_1) / n, so Pr[H_j = 1] = (j-1)/n.
class CountingAdversary : public CpaAdversary {
 public:
  explicit CountingAdversary(std::size_t keys) : keys_(keys) {}
  std::size_t announce_keys(SeededSampler&) override { return keys_; }
  std::vector<MessagePair> choose_messages(const ToyPke& pke, const CpaView& view,
                                           SeededSampler& sampler) override;
  int guess(const ToyPke& pke, const CpaView& view, const std::vector<BasisRegister>& cts,
            SeededSampler& sampler) override;

 private:
  std::size_t keys_;
};

}  // namespace qfelab::games
