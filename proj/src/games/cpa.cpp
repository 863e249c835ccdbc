#include "qfelab/games/cpa.hpp"

#include <cstdio>
#include <functional>

namespace qfelab::games {

namespace {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void record_public_key(Transcript& tr, std::size_t slot, std::uint64_t pk, std::uint64_t stream) {
  tr.record("challenger", "public-key", std::to_string(slot) + ":" + hex64(pk), stream);
}

void record_messages(Transcript& tr, const std::vector<MessagePair>& pairs, std::uint64_t stream) {
  std::string payload;
  for (const MessagePair& p : pairs) payload += hex64(p.m0) + "/" + hex64(p.m1) + ";";
  tr.record("adversary", "messages", payload, stream);
}

void record_ciphertext(Transcript& tr, std::size_t slot, const BasisRegister& ct, std::uint64_t stream) {
  tr.record("challenger", "ciphertext", std::to_string(slot) + ":" + describe(ct), stream);
}

void record_guess(Transcript& tr, int guess, std::uint64_t stream) {
  tr.record("adversary", "guess", std::to_string(guess), stream);
}

void check_pairs(const ToyPke& pke, const std::vector<MessagePair>& pairs, std::size_t expected) {
  if (pairs.size() != expected) {
    throw ProtocolViolation("adversary sent " + std::to_string(pairs.size()) + " message pairs, expected " +
                            std::to_string(expected));
  }
  for (const MessagePair& p : pairs) {
    if (p.m0 > pke.message_mask() || p.m1 > pke.message_mask()) {
      throw ProtocolViolation("challenge message wider than the message space");
    }
  }
}

int check_bit(int bit) {
  if (bit != 0 && bit != 1) throw ProtocolViolation("guess is not a bit");
  return bit;
}

// Shared body of the CPA, MK-CPA and hybrid experiments. `which(i)` picks the
// message of slot i (1-indexed); `coin` is recorded as a referee event when present.
Transcript run_slots(const ToyPke& pke, CpaAdversary& adversary, const SeededSampler& root,
                     bool multi_key, std::size_t single_slot, bool leak,
                     const std::function<int(std::size_t)>& which, std::optional<int> coin,
                     std::uint64_t coin_stream) {
  Transcript tr;
  SeededSampler adv_rng = root.child(kAdversaryStream);
  std::vector<std::size_t> slots;
  if (multi_key) {
    const std::size_t n = adversary.announce_keys(adv_rng);
    if (n < 1) throw ProtocolViolation("adversary announced zero keys");
    tr.record(kRefereeRole, "announce", std::to_string(n), adv_rng.id());
    for (std::size_t i = 1; i <= n; ++i) slots.push_back(i);
  } else {
    slots.push_back(single_slot);
  }

  std::vector<CpaChallenger> challengers;
  CpaView view;
  for (std::size_t slot : slots) {
    challengers.emplace_back(pke, root, slot);
    view.public_keys.push_back(challengers.back().public_key());
    if (leak) view.leaked_secret_keys.push_back(challengers.back().secret_key());
    record_public_key(tr, slot, challengers.back().public_key(), challengers.back().keygen_stream());
  }

  const std::vector<MessagePair> pairs = adversary.choose_messages(pke, view, adv_rng);
  check_pairs(pke, pairs, slots.size());
  record_messages(tr, pairs, adv_rng.id());

  if (coin) tr.record(kRefereeRole, "coin", std::to_string(*coin), coin_stream);

  std::vector<BasisRegister> cts;
  for (std::size_t k = 0; k < slots.size(); ++k) {
    cts.push_back(challengers[k].challenge(pairs[k], which(slots[k])));
    record_ciphertext(tr, slots[k], cts.back(), challengers[k].enc_stream());
  }
  const int guess = check_bit(adversary.guess(pke, view, cts, adv_rng));
  record_guess(tr, guess, adv_rng.id());
  tr.outcome = guess;
  return tr;
}

Transcript run_indistinguishability(const ToyPke& pke, CpaAdversary& adversary,
                                    const SeededSampler& sampler, const CpaOptions& options,
                                    bool multi_key) {
  SeededSampler coin_rng = sampler.child(kCoinStream);
  int b = 0;
  if (options.forced_bit) {
    b = *options.forced_bit;
    if (b != 0 && b != 1) throw std::invalid_argument("forced bit must be 0 or 1");
  } else {
    b = static_cast<int>(coin_rng.below(2));
  }
  Transcript tr = run_slots(pke, adversary, sampler, multi_key, options.key_slot,
                            options.leak_secret_keys, [b](std::size_t) { return b; }, b, coin_rng.id());
  tr.outcome = tr.outcome == b ? 1 : 0;
  return tr;
}

// D from the many-key reduction, written as an ordinary CPA adversary.
class ReductionAdversary : public CpaAdversary {
 public:
  ReductionAdversary(const ToyPke& pke, CpaAdversary& inner, std::size_t j, const SeededSampler& root)
      : pke_(pke), inner_(inner), j_(j), root_(root) {}

  std::size_t announce_keys(SeededSampler&) override { return 1; }

  std::vector<MessagePair> choose_messages(const ToyPke& pke, const CpaView& view,
                                           SeededSampler& sampler) override {
    n_ = inner_.announce_keys(sampler);
    if (j_ < 1 || j_ > n_) throw std::out_of_range("reduction_d: j outside [1, n]");
    transcript_.record(kRefereeRole, "announce", std::to_string(n_), sampler.id());
    CpaView inner_view;
    for (std::size_t i = 1; i <= n_; ++i) {
      if (i == j_) {
        own_.emplace_back(std::nullopt);
        inner_view.public_keys.push_back(view.public_keys.at(0));
        record_public_key(transcript_, i, view.public_keys.at(0),
                          root_.child(kKeygenStreams).child(i).id());
      } else {
        own_.emplace_back(std::in_place, pke_, root_, i);
        inner_view.public_keys.push_back(own_.back()->public_key());
        record_public_key(transcript_, i, own_.back()->public_key(), own_.back()->keygen_stream());
      }
    }
    inner_view_ = inner_view;
    pairs_ = inner_.choose_messages(pke, inner_view_, sampler);
    check_pairs(pke, pairs_, n_);
    record_messages(transcript_, pairs_, sampler.id());
    return {pairs_[j_ - 1]};
  }

  int guess(const ToyPke& pke, const CpaView&, const std::vector<BasisRegister>& cts,
            SeededSampler& sampler) override {
    std::vector<BasisRegister> inner_cts;
    for (std::size_t i = 1; i <= n_; ++i) {
      if (i == j_) {
        inner_cts.push_back(cts.at(0));
        record_ciphertext(transcript_, i, cts.at(0), root_.child(kEncStreams).child(i).id());
      } else {
        CpaChallenger& slot = *own_[i - 1];
        inner_cts.push_back(slot.challenge(pairs_[i - 1], i < j_ ? 1 : 0));
        record_ciphertext(transcript_, i, inner_cts.back(), slot.enc_stream());
      }
    }
    const int b = check_bit(inner_.guess(pke, inner_view_, inner_cts, sampler));
    record_guess(transcript_, b, sampler.id());
    transcript_.outcome = b;
    return b;
  }

  Transcript take_transcript() { return std::move(transcript_); }

 private:
  const ToyPke& pke_;
  CpaAdversary& inner_;
  std::size_t j_;
  SeededSampler root_;
  std::size_t n_ = 0;
  std::vector<std::optional<CpaChallenger>> own_;
  CpaView inner_view_;
  std::vector<MessagePair> pairs_;
  Transcript transcript_;
};

std::vector<MessagePair> fixed_pairs(const ToyPke& pke, std::size_t n) {
  return std::vector<MessagePair>(n, MessagePair{0, pke.message_mask()});
}

}  // namespace

CpaChallenger::CpaChallenger(const ToyPke& pke, const SeededSampler& root, std::size_t slot)
    : pke_(pke),
      keys_{0, 0},
      keygen_id_(0),
      enc_rng_(root.child(kEncStreams).child(slot)) {
  SeededSampler keygen = root.child(kKeygenStreams).child(slot);
  keygen_id_ = keygen.id();
  keys_ = pke.gen(keygen);
}

BasisRegister CpaChallenger::challenge(const MessagePair& pair, int bit) {
  return pke_.enc(keys_.public_key, bit ? pair.m1 : pair.m0, enc_rng_);
}

Transcript run_cpa(const ToyPke& pke, CpaAdversary& adversary, const SeededSampler& sampler,
                   const CpaOptions& options) {
  return run_indistinguishability(pke, adversary, sampler, options, false);
}

Transcript run_mk_cpa(const ToyPke& pke, CpaAdversary& adversary, const SeededSampler& sampler,
                      const CpaOptions& options) {
  return run_indistinguishability(pke, adversary, sampler, options, true);
}

Transcript hybrid_h(std::size_t j, const ToyPke& pke, CpaAdversary& adversary,
                    const SeededSampler& sampler) {
  if (j < 1) throw std::out_of_range("hybrid_h: j must be >= 1");
  std::size_t n_seen = 0;
  Transcript tr = run_slots(pke, adversary, sampler, true, 1, false,
                            [j, &n_seen](std::size_t i) {
                              n_seen = std::max(n_seen, i);
                              return i < j ? 1 : 0;
                            },
                            std::nullopt, 0);
  if (j > n_seen + 1) throw std::out_of_range("hybrid_h: j outside [1, n+1]");
  return tr;
}

ReductionRun reduction_d(const ToyPke& pke, CpaAdversary& adversary, std::size_t j,
                         int challenge_bit, const SeededSampler& sampler) {
  ReductionAdversary d(pke, adversary, j, sampler);
  CpaOptions options;
  options.forced_bit = challenge_bit;
  options.key_slot = j;
  ReductionRun run;
  run.outer = run_cpa(pke, d, sampler, options);
  run.inner = d.take_transcript();
  run.guess = run.inner.outcome;
  return run;
}

// ------------------------------------------------------------- adversaries

std::vector<MessagePair> ConstantAdversary::choose_messages(const ToyPke& pke, const CpaView& view,
                                                            SeededSampler&) {
  return fixed_pairs(pke, view.public_keys.size());
}

std::vector<MessagePair> SecretKeyOracleAdversary::choose_messages(const ToyPke& pke, const CpaView& view,
                                                                   SeededSampler&) {
  return fixed_pairs(pke, view.public_keys.size());
}

int SecretKeyOracleAdversary::guess(const ToyPke& pke, const CpaView& view,
                                    const std::vector<BasisRegister>& cts, SeededSampler&) {
  if (view.leaked_secret_keys.empty()) throw ProtocolViolation("secret-key oracle hook is not enabled");
  return pke.dec(view.leaked_secret_keys.at(0), cts.at(0)) == pke.message_mask() ? 1 : 0;
}

std::vector<MessagePair> PublicKeyDecryptAdversary::choose_messages(const ToyPke& pke, const CpaView& view,
                                                                    SeededSampler&) {
  return fixed_pairs(pke, view.public_keys.size());
}

int PublicKeyDecryptAdversary::guess(const ToyPke& pke, const CpaView& view,
                                     const std::vector<BasisRegister>& cts, SeededSampler&) {
  std::size_t ones = 0;
  for (std::size_t i = 0; i < cts.size(); ++i) {
    if (pke.decrypt_with_public_key(view.public_keys[i], cts[i]) == pke.message_mask()) ++ones;
  }
  return 2 * ones > cts.size() ? 1 : 0;
}

std::vector<MessagePair> EqualMessagesAdversary::choose_messages(const ToyPke& pke, const CpaView& view,
                                                                 SeededSampler& sampler) {
  std::vector<MessagePair> pairs;
  for (std::size_t i = 0; i < view.public_keys.size(); ++i) {
    const std::uint64_t m = sampler.bits() & pke.message_mask();
    pairs.push_back({m, m});
  }
  return pairs;
}

int EqualMessagesAdversary::guess(const ToyPke&, const CpaView&, const std::vector<BasisRegister>&,
                                  SeededSampler& sampler) {
  return static_cast<int>(sampler.below(2));
}

std::vector<MessagePair> CountingAdversary::choose_messages(const ToyPke& pke, const CpaView& view,
                                                            SeededSampler&) {
  return fixed_pairs(pke, view.public_keys.size());
}

int CountingAdversary::guess(const ToyPke& pke, const CpaView& view, const std::vector<BasisRegister>& cts,
                             SeededSampler& sampler) {
  std::size_t ones = 0;
  for (std::size_t i = 0; i < cts.size(); ++i) {
    if (pke.decrypt_with_public_key(view.public_keys[i], cts[i]) == pke.message_mask()) ++ones;
  }
  return sampler.bernoulli(static_cast<double>(ones) / static_cast<double>(cts.size())) ? 1 : 0;
}

}  // namespace qfelab::games
