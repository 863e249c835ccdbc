#include "qfelab/games/attacks.hpp"

#include <cmath>
#include <sstream>
#include <tuple>

#include "qfelab/parallel.hpp"

namespace qfelab::games {

namespace {

enum M1adStream : std::uint64_t { kM1adSetup = 0, kM1adMessages = 1, kM1adDecoder = 2 };

struct M1adPass {
  bool all_match = true;
  double disturbance = 0.0;
};

M1adPass run_m1ad_real(const ToyQfe& scheme, int n, SeededSampler& sampler) {
  SeededSampler setup_rng = sampler.child(kM1adSetup);
  SeededSampler message_rng = sampler.child(kM1adMessages);
  const MasterKey mk = scheme.setup(setup_rng);

  std::vector<int> bits(static_cast<std::size_t>(n));
  std::vector<QfeCiphertext> cts;
  for (int i = 0; i < n; ++i) {
    bits[static_cast<std::size_t>(i)] = static_cast<int>(message_rng.below(2));
    cts.push_back(scheme.enc(mk, PureState::basis(1, bits[static_cast<std::size_t>(i)]).density()));
  }
  // The single key query, made after all challenges.
  const FunctionalKey fk = scheme.keygen(mk, CircuitId::identity());

  M1adPass pass;
  for (int i = 0; i < n; ++i) {
    const DensityOperator out = as_density(scheme.dec(fk, cts[static_cast<std::size_t>(i)]));
    const Projector check = Projector::onto(PureState::basis(1, bits[static_cast<std::size_t>(i)]));
    const double p = gentle_measurement(out, check).probability;
    const double delta = 1.0 - p;
    if (delta > kEigenClip) pass.disturbance += 2.0 * std::sqrt(delta);
    if (p < 1.0 - 1e-9) pass.all_match = false;
  }
  return pass;
}

}  // namespace

int attack_m1ad(const ToyQfe& scheme, int n, const MessageCompressor* simulator,
                SeededSampler& sampler) {
  if (n < 0) throw std::invalid_argument("attack_m1ad: n must be >= 0");
  if (n == 0) return 1;
  if (simulator == nullptr) return run_m1ad_real(scheme, n, sampler).all_match ? 1 : 0;

  if (n > 20) throw std::invalid_argument("attack_m1ad: ideal mode enumerates 2^n messages, n <= 20");
  const Ensemble ensemble = compressor_ensemble(*simulator, n);
  const PrettyGoodMeasurement pgm(ensemble);
  SeededSampler message_rng = sampler.child(kM1adMessages);
  SeededSampler decoder_rng = sampler.child(kM1adDecoder);
  const std::uint64_t x = message_rng.below(std::uint64_t{1} << n);
  return pgm.measure(ensemble.entries[x].state, decoder_rng) == x ? 1 : 0;
}

double m1ad_disturbance(const ToyQfe& scheme, int n, SeededSampler& sampler) {
  if (n < 0) throw std::invalid_argument("m1ad_disturbance: n must be >= 0");
  return run_m1ad_real(scheme, n, sampler).disturbance;
}

QfeCiphertext OversizedSimulator::simulate(const ToyQfe& scheme, const MultiKeyView&, SeededSampler&) {
  return {BasisRegister{0, scheme.ciphertext_bound() + 1}};
}

QfeCiphertext PkeWeaknessSimulator::simulate(const ToyQfe& scheme, const MultiKeyView& view,
                                             SeededSampler&) {
  if (view.evaluations.empty()) throw ProtocolViolation("simulator view holds no evaluations");
  const std::uint64_t m = pke_.decrypt_with_public_key(view.circuits.at(0).public_key, view.evaluations[0]);
  return scheme.enc(view.master_key, BasisRegister{m, view.message_bits});
}

OneMnaAdversary::OneMnaAdversary(const ToyQfe& qfe, MultiKeySimulator* simulator, std::size_t n)
    : qfe_(qfe), simulator_(simulator), n_(n) {
  if (n < 1) throw std::invalid_argument("OneMnaAdversary: n must be >= 1");
}

std::vector<MessagePair> OneMnaAdversary::choose_messages(const ToyPke& pke, const CpaView& view,
                                                          SeededSampler& sampler) {
  fresh_keys_.clear();
  for (std::size_t i = 0; i < view.public_keys.size(); ++i) fresh_keys_.push_back(pke.gen(sampler));
  shared_message_ = sampler.bits() & pke.message_mask();
  std::vector<MessagePair> pairs;
  for (std::size_t i = 0; i < view.public_keys.size(); ++i) {
    pairs.push_back({shared_message_, sampler.bits() & pke.message_mask()});
  }
  return pairs;
}

int OneMnaAdversary::guess(const ToyPke& pke, const CpaView& view, const std::vector<BasisRegister>& cts,
                           SeededSampler& sampler) {
  const std::size_t n = cts.size();
  trap_ = static_cast<std::size_t>(sampler.below(n));
  bottom_ = false;

  std::vector<std::uint64_t> pks = view.public_keys;
  std::vector<BasisRegister> evaluations = cts;
  evaluations[trap_] = pke.enc(fresh_keys_[trap_].public_key, shared_message_, sampler);
  pks[trap_] = fresh_keys_[trap_].public_key;
  const std::uint64_t sk_trap = fresh_keys_[trap_].secret_key;

  const MasterKey mk = qfe_.setup(sampler);
  std::vector<CircuitId> circuits;
  for (std::uint64_t pk : pks) circuits.push_back(CircuitId::pke_enc(pk));
  const FunctionalKey fk_trap = qfe_.keygen(mk, circuits[trap_]);

  QfeCiphertext ct;
  if (simulator_ == nullptr) {
    ct = qfe_.enc(mk, BasisRegister{shared_message_, pke.message_bits()});
  } else {
    const MultiKeyView v{mk, circuits, evaluations, pke.message_bits()};
    ct = simulator_->simulate(qfe_, v, sampler);
  }
  if (register_qubits(ct.body) > qfe_.ciphertext_bound()) {
    bottom_ = true;
    return 1;
  }
  const Register opened = qfe_.dec(fk_trap, ct);
  const auto* reg = std::get_if<BasisRegister>(&opened);
  if (reg == nullptr) return 1;
  return pke.dec(sk_trap, *reg) == shared_message_ ? 0 : 1;
}

OneMnaRun attack_1mna(const ToyQfe& qfe, const ToyPke& pke, MultiKeySimulator* simulator,
                      std::size_t n, int challenge_bit, const SeededSampler& sampler) {
  OneMnaAdversary adversary(qfe, simulator, n);
  CpaOptions options;
  options.forced_bit = challenge_bit;
  OneMnaRun run;
  run.challenge_bit = challenge_bit;
  run.transcript = run_mk_cpa(pke, adversary, sampler, options);
  run.guess = run.transcript.events.empty() ? 0 : std::stoi(run.transcript.events.back().payload);
  run.bottom = adversary.took_bottom_branch();
  return run;
}

RecoveryEstimate attack_1mna_recovery(const MessageCompressor& simulator, int message_bits,
                                      std::size_t trials, const SeededSampler& sampler) {
  return recovery_experiment(simulator, message_bits, trials, sampler);
}

CompressorPair simulator_as_compressor(const SuccinctQfeStub& qfe, const PrsFamily& family) {
  if (!qfe.succinct()) {
    throw std::invalid_argument("simulator_as_compressor: scheme is not succinct (t >= s), experiment is vacuous");
  }
  if (family.n() != qfe.message_qubits()) {
    throw DimensionMismatch("simulator_as_compressor: family states have " + std::to_string(family.n()) +
                            " qubits, scheme messages have " + std::to_string(qfe.message_qubits()));
  }
  return CompressorPair{qfe.enc_channel(), qfe.dec_channel(CircuitId::identity())};
}

SimCompressorReport sim_compressor_experiment(const SuccinctQfeStub& qfe, const PrsFamily& family,
                                              std::size_t samples, const SeededSampler& sampler) {
  if (samples < 2) throw std::invalid_argument("sim_compressor_experiment: need at least 2 samples");
  const CompressorPair pair = simulator_as_compressor(qfe, family);
  std::vector<double> fid(samples);
  std::vector<double> reject(samples);
  parallel_for(samples, [&](std::size_t i) {
    SeededSampler local = sampler.child(i);
    const PureState psi = family.generate(family.random_key(local));
    fid[i] = pair.self_fidelity(psi);
    // Swap test of psi against Decomp(Comp(psi)) accepts with probability (1 + f)/2.
    reject[i] = local.bernoulli((1.0 + fid[i]) / 2.0) ? 0.0 : 1.0;
  });

  const auto mean_se = [](const std::vector<double>& xs) {
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= static_cast<double>(xs.size() - 1);
    return std::pair{mean, std::sqrt(var / static_cast<double>(xs.size()))};
  };

  SimCompressorReport report;
  report.s = qfe.message_qubits();
  report.t = qfe.ciphertext_qubits();
  report.samples = samples;
  std::tie(report.f_prs, report.f_prs_stderr) = mean_se(fid);
  std::tie(report.swap_reject, report.swap_reject_stderr) = mean_se(reject);
  report.favg_bound = incompressibility_bound(report.s, report.t).favg_bound;
  return report;
}

std::string SimCompressorReport::summary() const {
  std::ostringstream out;
  out << (impossibility_confirmed() ? "impossibility confirmed" : "impossibility NOT confirmed") << " at (" << s
      << ", " << t << "): f_prs=" << f_prs << " bound=" << favg_bound;
  return out.str();
}

std::string SimCompressorReport::to_csv() const {
  std::ostringstream out;
  out.precision(17);
  out << "# schema=1\n";
  out << "s,t,samples,f_prs,f_prs_stderr,favg_bound,swap_reject,swap_reject_stderr,confirmed\n";
  out << s << ',' << t << ',' << samples << ',' << f_prs << ',' << f_prs_stderr << ',' << favg_bound << ','
      << swap_reject << ',' << swap_reject_stderr << ',' << (impossibility_confirmed() ? 1 : 0) << '\n';
  return out.str();
}

}  // namespace qfelab::games
