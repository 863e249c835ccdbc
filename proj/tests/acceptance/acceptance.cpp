// Acceptance suite: one pass/fail line per criterion.
//   acceptance              run everything
//   acceptance --only <id>  run one criterion

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "qfelab/channels.hpp"
#include "qfelab/chanopt.hpp"
#include "qfelab/core.hpp"
#include "qfelab/games/attacks.hpp"
#include "qfelab/games/cpa.hpp"
#include "qfelab/games/decoding.hpp"
#include "qfelab/haar.hpp"
#include "qfelab/prs.hpp"

using namespace qfelab;
using namespace qfelab::games;

namespace {

// Collects sub-check results and a short detail trail for one criterion.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok) {
      pass_ = false;
      failures_.push_back(what);
    }
  }
  void note(const std::string& line) { notes_.push_back(line); }

  bool pass() const { return pass_; }
  const std::vector<std::string>& failures() const { return failures_; }
  const std::vector<std::string>& notes() const { return notes_; }

 private:
  bool pass_ = true;
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

DensityOperator random_mixed(int qubits, SeededSampler& s) {
  const auto d = static_cast<Eigen::Index>(dimension_of(qubits));
  Matrix g(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) g(i, j) = Complex(s.normal(), s.normal());
  }
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityOperator(rho);
}

// Haar second moment: E[psi psi* (x) psi psi*] = (I + SWAP) / (d (d + 1)), which gives
// F_avg = (sum |Tr K|^2 + sum Tr K*K) / (d (d + 1)) straight from the Kraus operators.
double haar_moment_favg(const KrausChannel& ch) {
  const double d = static_cast<double>(ch.d_in());
  double total = 0.0;
  for (const Matrix& k : ch.kraus_ops()) total += std::norm(k.trace()) + (k.adjoint() * k).trace().real();
  return total / (d * (d + 1.0));
}

const std::vector<std::pair<int, int>> kBoundGrid{{2, 1}, {3, 1}, {3, 2}, {4, 2}, {4, 3}};

void fidelity_relation(Check& c) {
  SeededSampler root(20240601);
  double worst_relation = 0.0;
  double worst_choi = 0.0;
  double worst_z = 0.0;
  for (int i = 0; i < 50; ++i) {
    SeededSampler s = root.child(static_cast<std::uint64_t>(i));
    const int n = 1 + i % 3;
    const int count = 1 + static_cast<int>(s.below(4));
    const KrausChannel ch = KrausChannel::random(n, n, count, s);
    const double d = static_cast<double>(ch.d_in());
    const double fe = entanglement_fidelity(ch);
    const double fe_choi = entanglement_fidelity_choi(ch);
    const double favg = average_fidelity_exact(ch);
    worst_relation = std::max(worst_relation, std::abs(favg - (d * fe + 1.0) / (d + 1.0)));
    worst_relation = std::max(worst_relation, std::abs(haar_moment_favg(ch) - (d * fe_choi + 1.0) / (d + 1.0)));
    worst_choi = std::max(worst_choi, std::abs(fe - fe_choi));
    const MonteCarloEstimate mc = average_fidelity_mc(ch, 100000, root.child(1000 + i));
    const double z = std::abs(mc.mean - favg) / mc.std_error;
    worst_z = std::max(worst_z, z);
    c.expect(z <= 5.0, "channel " + std::to_string(i) + ": MC off by " + fmt(z) + " stderr");
  }
  c.expect(worst_relation <= 1e-9, "F_avg vs (d F_E + 1)/(d + 1) gap " + fmt(worst_relation));
  c.expect(worst_choi <= 1e-9, "Kraus vs Choi gap " + fmt(worst_choi));
  c.note("max |F_avg - (dF_E+1)/(d+1)| = " + fmt(worst_relation) + ", max |Kraus - Choi| = " + fmt(worst_choi) +
         ", max MC z = " + fmt(worst_z));
}

void incompressibility_bound_check(Check& c) {
  c.expect(std::abs(incompressibility_bound(2, 1).favg_bound - 3.0 / 5.0) <= 1e-15, "(2,1) ceiling is not 3/5");
  SeededSampler root(20240602);
  for (const auto& [n, m] : kBoundGrid) {
    const double bound = incompressibility_bound(n, m).favg_bound;
    const PrsFamily family(m, n);
    for (CompressorKind kind : {CompressorKind::projection, CompressorKind::trace_out, CompressorKind::keyed}) {
      const double f = make_compressor(kind, n, m, &family).average_fidelity();
      c.expect(f <= bound + 1e-6, std::string(to_string(kind)) + " at (" + std::to_string(n) + "," +
                                      std::to_string(m) + ") = " + fmt(f) + " > " + fmt(bound));
    }
    const OptimizationResult opt = optimize_compression(n, m, 300, 8, root.child(static_cast<std::uint64_t>(n * 16 + m)));
    c.expect(opt.trace.best_favg <= bound + 1e-6, "chanopt at (" + std::to_string(n) + "," + std::to_string(m) +
                                                      ") = " + fmt(opt.trace.best_favg) + " > " + fmt(bound));
    c.note("(" + std::to_string(n) + "," + std::to_string(m) + ") bound " + fmt(bound) + ", chanopt best " +
           fmt(opt.trace.best_favg));
    if (n == 2 && m == 1) {
      c.expect(opt.trace.best_favg >= 0.5, "chanopt (8 restarts) at (2,1) reached " + fmt(opt.trace.best_favg) +
                                               " < 0.5 target");
    }
  }
}

void one_qubit_compression(Check& c) {
  for (int n = 2; n <= 8; ++n) {
    const int m = n - 1;
    const double target = 0.5 + 2.0 / std::pow(2.0, n);
    const PrsFamily family(std::min(m, 8), n);
    double worst = 0.0;
    for (CompressorKind kind : {CompressorKind::projection, CompressorKind::trace_out, CompressorKind::keyed}) {
      worst = std::max(worst, make_compressor(kind, n, m, &family).average_fidelity());
    }
    const double bound = incompressibility_bound(n, m).favg_bound;
    c.expect(worst <= target, "n=" + std::to_string(n) + ": F_avg " + fmt(worst) + " > " + fmt(target));
    c.expect(bound <= target, "n=" + std::to_string(n) + ": bound " + fmt(bound) + " > " + fmt(target));
    c.note("n=" + std::to_string(n) + " max F_avg " + fmt(worst) + ", bound " + fmt(bound) + ", 1/2+2/2^n " +
           fmt(target));
  }
}

void concentration(Check& c) {
  const std::vector<double> eps{0.01, 0.02, 0.05, 0.1, 0.2};
  double previous = 1.0;
  SeededSampler root(20240604);
  for (int n : {4, 6, 8, 10}) {
    const ConcentrationReport r = concentration_experiment(KrausChannel::trace_and_reattach(n, 1), 10000, eps,
                                                           root.child(static_cast<std::uint64_t>(n)));
    c.expect(r.empirical_std < previous, "std did not decrease at n=" + std::to_string(n));
    c.expect(r.within_levy_bound(), "Levy bound exceeded at n=" + std::to_string(n));
    previous = r.empirical_std;
    c.note("n=" + std::to_string(n) + " std " + fmt(r.empirical_std) + ", tail(0.05) " +
           fmt(r.tails[2].tail_frequency) + " <= " + fmt(r.tails[2].levy_bound));
  }
}

void swap_test_algebra(Check& c) {
  SeededSampler root(20240605);
  {
    const PrsFamily family(16, 4);
    const CompressorPair id{KrausChannel::identity(4), KrausChannel::identity(4)};
    const DistinguisherResult r = distinguisher_advantage(id, family, 10000, root.child(0));
    c.expect(r.win_prob == 0.5, "identity fixture win " + fmt(r.win_prob) + " != 1/2");
    c.note("identity: win " + fmt(r.win_prob));
  }
  {
    const PrsFamily family(32, 6);
    const CompressorPair pair = make_compressor(CompressorKind::trace_out, 6, 5);
    const DistinguisherResult r = distinguisher_advantage(pair, family, 10000, root.child(1));
    const double z = std::abs(r.win_prob - r.predicted_win()) / r.combined_stderr();
    c.expect(z <= 5.0, "trace-out fixture off by " + fmt(z) + " stderr");
    c.note("trace_out (6,5): win " + fmt(r.win_prob) + ", predicted " + fmt(r.predicted_win()));
  }
  {
    const PrsFamily family(2, 4);
    const CompressorPair pair = make_compressor(CompressorKind::keyed, 4, 2, &family);
    const DistinguisherResult r = distinguisher_advantage(pair, family, 10000, root.child(2));
    const double z = std::abs(r.win_prob - r.predicted_win()) / r.combined_stderr();
    c.expect(z <= 5.0, "keyed fixture off by " + fmt(z) + " stderr");
    c.expect(r.win_prob >= 0.65, "keyed fixture win " + fmt(r.win_prob) + " < 0.65");
    c.note("keyed (4,2): win " + fmt(r.win_prob) + ", predicted " + fmt(r.predicted_win()));
  }
}

void decoding_cap(Check& c) {
  SeededSampler root(20240606);
  std::uint64_t index = 0;
  for (int bits : {4, 6, 8}) {
    for (int qubits : {1, 2}) {
      const HaarCodebookCompressor codebook(qubits, root.child(index++).id());
      const double p = pgm_success(compressor_ensemble(codebook, bits));
      const double cap = guessing_upper_bound(std::uint64_t{1} << bits, dimension_of(qubits));
      c.expect(p <= cap + 1e-9, "pgm N=" + std::to_string(1 << bits) + " K=" + std::to_string(1 << qubits) +
                                    " " + fmt(p) + " > " + fmt(cap));
    }
  }
  const ToyQfe qfe;
  const HaarCodebookCompressor sim(2, root.child(100).id());
  const RecoveryEstimate ideal = recovery_experiment(sim, 8, 1000, root.child(101));
  c.expect(ideal.success <= 1.0 / 64.0 + 5.0 * ideal.std_error, "m1ad ideal success " + fmt(ideal.success));
  std::size_t real = 0;
  for (std::size_t t = 0; t < 1000; ++t) {
    SeededSampler s = root.child(200).child(t);
    real += static_cast<std::size_t>(attack_m1ad(qfe, 8, nullptr, s));
  }
  c.expect(real == 1000, "m1ad real mode " + std::to_string(real) + "/1000");
  c.note("m1ad ideal " + fmt(ideal.success) + " (cap 1/64), real " + std::to_string(real) + "/1000");
}

void hybrid_soundness(Check& c) {
  const ToyPke pke;
  const std::size_t n = 4;
  std::size_t reduction_ok = 0;
  std::size_t boundary_ok = 0;
  std::size_t single_ok = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const SeededSampler s(20240607, seed);
    CountingAdversary adv(n);
    bool all = true;
    for (std::size_t j = 1; j <= n; ++j) {
      all = all && reduction_d(pke, adv, j, 0, s).inner.same_protocol(hybrid_h(j, pke, adv, s));
      all = all && reduction_d(pke, adv, j, 1, s).inner.same_protocol(hybrid_h(j + 1, pke, adv, s));
    }
    reduction_ok += all ? 1 : 0;
    CpaOptions zero;
    zero.forced_bit = 0;
    CpaOptions one;
    one.forced_bit = 1;
    boundary_ok += hybrid_h(1, pke, adv, s).same_protocol(run_mk_cpa(pke, adv, s, zero)) &&
                           hybrid_h(n + 1, pke, adv, s).same_protocol(run_mk_cpa(pke, adv, s, one))
                       ? 1
                       : 0;
    CountingAdversary single(1);
    const Transcript mk = run_mk_cpa(pke, single, s);
    const Transcript cpa = run_cpa(pke, single, s);
    single_ok += mk.same_protocol(cpa) && mk.outcome == cpa.outcome ? 1 : 0;
  }
  c.expect(reduction_ok == 100, "reduction/hybrid equality " + std::to_string(reduction_ok) + "/100");
  c.expect(boundary_ok == 100, "boundary equality " + std::to_string(boundary_ok) + "/100");
  c.expect(single_ok == 100, "n=1 MK-CPA vs CPA " + std::to_string(single_ok) + "/100");
  c.note("reduction " + std::to_string(reduction_ok) + "/100, boundary " + std::to_string(boundary_ok) +
         "/100, single-key " + std::to_string(single_ok) + "/100");
}

void attack_1mna_pipeline(Check& c) {
  const ToyQfe qfe;
  const ToyPke pke;
  const auto n = static_cast<std::size_t>(qfe.proof_message_count());
  SeededSampler root(20240608);
  std::size_t zeros = 0;
  for (std::size_t t = 0; t < 1000; ++t) {
    zeros += attack_1mna(qfe, pke, nullptr, n, 0, root.child(0).child(t)).guess == 0 ? 1 : 0;
  }
  c.expect(zeros == 1000, "modified real b'=0 in " + std::to_string(zeros) + "/1000");

  OversizedSimulator oversized;
  std::size_t bottoms = 0;
  for (std::size_t t = 0; t < 100; ++t) {
    const OneMnaRun a = attack_1mna(qfe, pke, &oversized, n, static_cast<int>(t % 2), root.child(1).child(t));
    const OneMnaRun b = attack_1mna(qfe, pke, &oversized, n, static_cast<int>(t % 2), root.child(1).child(t));
    bottoms += a.bottom && a.guess == 1 && a.transcript.events == b.transcript.events ? 1 : 0;
  }
  c.expect(bottoms == 100, "bottom branch in " + std::to_string(bottoms) + "/100");

  const HaarCodebookCompressor sim(2, root.child(2).id());
  const RecoveryEstimate r = attack_1mna_recovery(sim, 8, 1000, root.child(3));
  c.expect(r.success <= r.cap + 5.0 * r.std_error, "b=1 recovery " + fmt(r.success) + " above cap " + fmt(r.cap));
  c.note("n=" + std::to_string(n) + ", b'=0 " + std::to_string(zeros) + "/1000, bottom " + std::to_string(bottoms) +
         "/100, recovery " + fmt(r.success) + " (cap " + fmt(r.cap) + ", exact PGM " + fmt(r.exact) + ")");
}

void core_invariants(Check& c) {
  SeededSampler root(20240609);
  std::size_t fvdg = 0;
  std::size_t l1l2 = 0;
  std::size_t gentle = 0;
  for (std::size_t i = 0; i < 1000; ++i) {
    SeededSampler s = root.child(i);
    const int n = 1 + static_cast<int>(i % 3);
    const DensityOperator a = random_mixed(n, s);
    const DensityOperator b = random_mixed(n, s);
    const double f = fidelity(a, b);
    const double t = trace_distance(a, b);
    fvdg += (1.0 - std::sqrt(f) <= t + 1e-9 && t <= std::sqrt(std::max(0.0, 1.0 - f)) + 1e-9) ? 1 : 0;

    const PureState psi = sample_haar_state(n, s);
    const PureState phi = sample_haar_state(n, s);
    const double lhs = trace_norm_hermitian(psi.density().matrix() - phi.density().matrix());
    l1l2 += lhs <= 2.0 * (psi.amplitudes() - phi.amplitudes()).norm() + 1e-9 ? 1 : 0;

    const MeasurementOutcome out = gentle_measurement(a, Projector::onto(psi));
    gentle += trace_distance(out.post, a) <= 2.0 * std::sqrt(1.0 - out.probability) + 1e-9 ? 1 : 0;
  }
  c.expect(fvdg == 1000, "Fuchs-van de Graaf held on " + std::to_string(fvdg) + "/1000");
  c.expect(l1l2 == 1000, "trace vs Euclidean held on " + std::to_string(l1l2) + "/1000");
  c.expect(gentle == 1000, "gentle measurement held on " + std::to_string(gentle) + "/1000");
  c.note("FvdG " + std::to_string(fvdg) + "/1000, l1-l2 " + std::to_string(l1l2) + "/1000, gentle " +
         std::to_string(gentle) + "/1000");
}

struct Criterion {
  const char* id;
  double budget_seconds;
  std::function<void(Check&)> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {"fidelity-relation", 60, fidelity_relation},
      {"incompressibility-bound", 600, incompressibility_bound_check},
      {"one-qubit-compression", 120, one_qubit_compression},
      {"concentration", 300, concentration},
      {"swap-test-algebra", 300, swap_test_algebra},
      {"decoding-cap", 300, decoding_cap},
      {"hybrid-soundness", 120, hybrid_soundness},
      {"attack-1mna-pipeline", 300, attack_1mna_pipeline},
      {"core-invariants", 60, core_invariants},
  };
  return all;
}

bool run_one(const Criterion& cr) {
  Check c;
  const auto start = std::chrono::steady_clock::now();
  try {
    cr.run(c);
  } catch (const std::exception& e) {
    c.expect(false, std::string("exception: ") + e.what());
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  c.expect(seconds <= cr.budget_seconds, "runtime " + fmt(seconds) + "s over budget " + fmt(cr.budget_seconds) + "s");
  std::printf("[%s] %s (%.1fs / %.0fs)\n", c.pass() ? "PASS" : "FAIL", cr.id, seconds, cr.budget_seconds);
  for (const std::string& n : c.notes()) std::printf("    %s\n", n.c_str());
  for (const std::string& f : c.failures()) std::printf("    failed: %s\n", f.c_str());
  std::fflush(stdout);
  return c.pass();
}

}  // namespace

int main(int argc, char** argv) {
  std::string only;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      only = argv[++i];
    } else {
      std::fprintf(stderr, "usage: acceptance [--only <id>]\n");
      return 2;
    }
  }
  bool all_pass = true;
  bool matched = false;
  for (const Criterion& cr : criteria()) {
    if (!only.empty() && only != cr.id) continue;
    matched = true;
    all_pass = run_one(cr) && all_pass;
  }
  if (!matched) {
    std::fprintf(stderr, "unknown criterion '%s'\n", only.c_str());
    return 2;
  }
  return all_pass ? 0 : 1;
}
