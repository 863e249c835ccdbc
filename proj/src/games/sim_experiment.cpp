#include "qfelab/games/sim_experiment.hpp"

namespace qfelab::games {

namespace {

enum Stream : std::uint64_t { kSetup = 0, kAdversary = 1, kSimulator = 2, kMeasure = 3 };

int measure_low_bit(const Register& alpha, SeededSampler& sampler) {
  if (const auto* b = std::get_if<BasisRegister>(&alpha)) return static_cast<int>(b->label & 1U);
  const Matrix& rho = std::get<DensityOperator>(alpha).matrix();
  const double u = sampler.uniform();
  double acc = 0.0;
  for (Eigen::Index x = 0; x < rho.rows(); ++x) {
    acc += rho(x, x).real();
    if (u < acc) return static_cast<int>(x & 1);
  }
  return static_cast<int>((rho.rows() - 1) & 1);
}

Register zero_register(int width) {
  if (width <= kMaxQubits) return PureState::basis(width, 0).density();
  return BasisRegister{0, width};
}

}  // namespace

SimulatorView::SimulatorView(MasterKey mk, std::optional<CircuitId> circuit,
                             std::optional<Register> evaluation, int message_qubits)
    : mk_(mk), circuit_(std::move(circuit)), evaluation_(std::move(evaluation)),
      message_qubits_(message_qubits) {}

const CircuitId& SimulatorView::circuit() const {
  if (!circuit_) throw FirewallViolation("simulator view holds no circuit at this stage");
  return *circuit_;
}

const Register& SimulatorView::evaluation() const {
  if (!evaluation_) throw FirewallViolation("simulator view holds no evaluation at this stage");
  return *evaluation_;
}

const Register& SimulatorView::message() const {
  throw FirewallViolation("simulator attempted to read the challenge message");
}

QfeCiphertext EchoEvaluationSimulator::simulate_ciphertext(const SimulatorView& view, SeededSampler&) {
  if (view.has_circuit()) return scheme_.enc(view.master_key(), view.evaluation());
  return scheme_.enc(view.master_key(), zero_register(view.message_qubits()));
}

FunctionalKey EchoEvaluationSimulator::simulate_key(const SimulatorView& view, SeededSampler&) {
  return scheme_.keygen(view.master_key(), view.circuit());
}

FixedQueryAdversary::FixedQueryAdversary(CircuitId circuit, Register message, Adaptivity adaptivity)
    : circuit_(circuit), message_(std::move(message)), adaptivity_(adaptivity) {}

std::optional<CircuitId> FixedQueryAdversary::query_before_challenge(SeededSampler&) {
  if (adaptivity_ == Adaptivity::non_adaptive) return circuit_;
  return std::nullopt;
}

Register FixedQueryAdversary::choose_message(SeededSampler&) { return message_; }

std::optional<CircuitId> FixedQueryAdversary::query_after_challenge(SeededSampler&) {
  if (adaptivity_ == Adaptivity::adaptive) return circuit_;
  return std::nullopt;
}

Register FixedQueryAdversary::output(const ToyQfe& scheme, const FunctionalKey& key,
                                     const QfeCiphertext& ct, SeededSampler&) {
  return scheme.dec(key, ct);
}

Transcript run_sim_experiment(SimMode mode, const ToyQfe& scheme, SimAdversary& adversary,
                              QfeSimulator* simulator, const SeededSampler& sampler) {
  const bool ideal = mode.world == World::ideal;
  const bool adaptive = mode.adaptivity == Adaptivity::adaptive;
  if (ideal && simulator == nullptr) throw std::invalid_argument("ideal experiment needs a simulator");

  Transcript tr;
  SeededSampler setup_rng = sampler.child(kSetup);
  SeededSampler adv_rng = sampler.child(kAdversary);
  SeededSampler sim_rng = sampler.child(kSimulator);
  SeededSampler measure_rng = sampler.child(kMeasure);

  const MasterKey mk = scheme.setup(setup_rng);
  tr.record("challenger", "setup", "", setup_rng.id());

  std::optional<CircuitId> circuit = adversary.query_before_challenge(adv_rng);
  std::optional<FunctionalKey> key;
  if (circuit) {
    key = scheme.keygen(mk, *circuit);
    tr.record("adversary", "key-query", circuit->to_string(), adv_rng.id());
    tr.record("challenger", "functional-key", circuit->to_string());
  } else if (!adaptive) {
    throw ProtocolViolation("non-adaptive adversary must query its key before the challenge");
  }

  const Register message = adversary.choose_message(adv_rng);
  const int width = register_qubits(message);
  tr.record("adversary", "challenge-length", std::to_string(width), adv_rng.id());

  QfeCiphertext ct;
  if (!ideal) {
    ct = scheme.enc(mk, message);
    tr.record("challenger", "ciphertext", describe(ct.body));
  } else {
    std::optional<Register> evaluation;
    if (circuit) evaluation = evaluate_circuit(*circuit, message);
    const SimulatorView view(mk, circuit, std::move(evaluation), width);
    ct = simulator->simulate_ciphertext(view, sim_rng);
    tr.record(adaptive ? "sim1" : "sim", "ciphertext", describe(ct.body), sim_rng.id());
  }
  if (register_qubits(ct.body) > scheme.ciphertext_bound()) {
    throw ProtocolViolation("ciphertext exceeds the declared size bound");
  }

  std::optional<CircuitId> late = adversary.query_after_challenge(adv_rng);
  if (late) {
    if (!adaptive) throw ProtocolViolation("non-adaptive experiment received a post-challenge key query");
    if (circuit) throw ProtocolViolation("key query budget of one exceeded");
    circuit = late;
    tr.record("adversary", "key-query", late->to_string(), adv_rng.id());
    if (!ideal) {
      key = scheme.keygen(mk, *late);
      tr.record("challenger", "functional-key", late->to_string());
    } else {
      const SimulatorView view(mk, late, evaluate_circuit(*late, message), width);
      key = simulator->simulate_key(view, sim_rng);
      tr.record("sim2", "functional-key", key->circuit.to_string(), sim_rng.id());
    }
  }
  if (!key) throw ProtocolViolation("adversary never queried a functional key");

  const Register alpha = adversary.output(scheme, *key, ct, adv_rng);
  tr.record("adversary", "output", describe(alpha), adv_rng.id());
  tr.outcome = measure_low_bit(alpha, measure_rng);
  tr.record(kRefereeRole, "outcome", std::to_string(tr.outcome), measure_rng.id());
  return tr;
}

}  // namespace qfelab::games
