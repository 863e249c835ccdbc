#include <gtest/gtest.h>

#include "qfelab/games/sim_experiment.hpp"

using namespace qfelab;
using namespace qfelab::games;

namespace {

class MessagePeekingSimulator : public QfeSimulator {
 public:
  QfeCiphertext simulate_ciphertext(const SimulatorView& view, SeededSampler&) override {
    return {view.message()};
  }
  FunctionalKey simulate_key(const SimulatorView& view, SeededSampler&) override { return {0, view.circuit()}; }
};

class EarlyCircuitSimulator : public QfeSimulator {
 public:
  QfeCiphertext simulate_ciphertext(const SimulatorView& view, SeededSampler&) override {
    (void)view.circuit();
    return {BasisRegister{0, 1}};
  }
  FunctionalKey simulate_key(const SimulatorView& view, SeededSampler&) override { return {0, view.circuit()}; }
};

class LateSecondQuery : public FixedQueryAdversary {
 public:
  using FixedQueryAdversary::FixedQueryAdversary;
  std::optional<CircuitId> query_after_challenge(SeededSampler&) override { return CircuitId::identity(); }
};

const Register kZero = PureState::basis(1, 0).density();
const Register kOne = PureState::basis(1, 1).density();

}  // namespace

TEST(SimExperiment, RealNonAdaptiveDecryptsMessage) {
  const ToyQfe qfe;
  FixedQueryAdversary adv(CircuitId::identity(), kZero, Adaptivity::non_adaptive);
  const Transcript t = run_sim_experiment({World::real, Adaptivity::non_adaptive}, qfe, adv, nullptr,
                                          SeededSampler(1));
  EXPECT_EQ(t.outcome, 0);
  FixedQueryAdversary adv1(CircuitId::identity(), kOne, Adaptivity::non_adaptive);
  EXPECT_EQ(run_sim_experiment({World::real, Adaptivity::non_adaptive}, qfe, adv1, nullptr, SeededSampler(1))
                .outcome,
            1);
}

TEST(SimExperiment, EchoSimulatorReproducesRealCiphertext) {
  const ToyQfe qfe;
  EchoEvaluationSimulator sim(qfe);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    FixedQueryAdversary a(CircuitId::identity(), kOne, Adaptivity::non_adaptive);
    FixedQueryAdversary b(CircuitId::identity(), kOne, Adaptivity::non_adaptive);
    const Transcript real =
        run_sim_experiment({World::real, Adaptivity::non_adaptive}, qfe, a, nullptr, SeededSampler(seed));
    const Transcript ideal =
        run_sim_experiment({World::ideal, Adaptivity::non_adaptive}, qfe, b, &sim, SeededSampler(seed));
    EXPECT_EQ(real.outcome, ideal.outcome);
    const auto ct = [](const Transcript& t) {
      for (const Event& e : t.events) {
        if (e.kind == "ciphertext") return e.payload;
      }
      return std::string();
    };
    EXPECT_EQ(ct(real), ct(ideal));
  }
}

TEST(SimExperiment, AdaptiveKeyQueryGoesToSecondSimulator) {
  const ToyQfe qfe;
  EchoEvaluationSimulator sim(qfe);
  FixedQueryAdversary adv(CircuitId::identity(), kOne, Adaptivity::adaptive);
  const Transcript t =
      run_sim_experiment({World::ideal, Adaptivity::adaptive}, qfe, adv, &sim, SeededSampler(3));
  bool saw_sim1_ct = false;
  bool saw_sim2_key = false;
  for (const Event& e : t.events) {
    if (e.role == "sim1" && e.kind == "ciphertext") saw_sim1_ct = true;
    if (e.role == "sim2" && e.kind == "functional-key") saw_sim2_key = true;
    EXPECT_FALSE(e.role == "sim1" && e.kind == "functional-key");
  }
  EXPECT_TRUE(saw_sim1_ct);
  EXPECT_TRUE(saw_sim2_key);
}

TEST(SimExperiment, FirewallBlocksMessageReads) {
  const ToyQfe qfe;
  MessagePeekingSimulator sim;
  FixedQueryAdversary adv(CircuitId::identity(), kZero, Adaptivity::non_adaptive);
  EXPECT_THROW(run_sim_experiment({World::ideal, Adaptivity::non_adaptive}, qfe, adv, &sim, SeededSampler(4)),
               FirewallViolation);
}

TEST(SimExperiment, FirewallBlocksCircuitBeforeAdaptiveQuery) {
  const ToyQfe qfe;
  EarlyCircuitSimulator sim;
  FixedQueryAdversary adv(CircuitId::identity(), kZero, Adaptivity::adaptive);
  EXPECT_THROW(run_sim_experiment({World::ideal, Adaptivity::adaptive}, qfe, adv, &sim, SeededSampler(5)),
               FirewallViolation);
}

TEST(SimExperiment, ProtocolViolations) {
  const ToyQfe qfe;
  // NA game with an adversary that never queries before the challenge.
  FixedQueryAdversary late(CircuitId::identity(), kZero, Adaptivity::adaptive);
  EXPECT_THROW(run_sim_experiment({World::real, Adaptivity::non_adaptive}, qfe, late, nullptr, SeededSampler(6)),
               ProtocolViolation);
  // Second key query exceeds the budget of one.
  LateSecondQuery twice(CircuitId::identity(), kZero, Adaptivity::non_adaptive);
  EXPECT_THROW(run_sim_experiment({World::real, Adaptivity::adaptive}, qfe, twice, nullptr, SeededSampler(6)),
               ProtocolViolation);
  // Oversized challenge.
  const ToyQfe small(16, 2);
  FixedQueryAdversary wide(CircuitId::identity(), BasisRegister{0, 3}, Adaptivity::non_adaptive);
  EXPECT_THROW(run_sim_experiment({World::real, Adaptivity::non_adaptive}, small, wide, nullptr, SeededSampler(6)),
               ProtocolViolation);
}

TEST(SimExperiment, ReplayIsDeterministic) {
  const ToyQfe qfe;
  EchoEvaluationSimulator sim(qfe);
  const Register plus = PureState::normalized(Vector::Ones(2)).density();
  FixedQueryAdversary a(CircuitId::identity(), plus, Adaptivity::adaptive);
  FixedQueryAdversary b(CircuitId::identity(), plus, Adaptivity::adaptive);
  const Transcript x = run_sim_experiment({World::ideal, Adaptivity::adaptive}, qfe, a, &sim, SeededSampler(8));
  const Transcript y = run_sim_experiment({World::ideal, Adaptivity::adaptive}, qfe, b, &sim, SeededSampler(8));
  EXPECT_EQ(x.events, y.events);
  EXPECT_EQ(x.to_jsonl(), y.to_jsonl());
}
