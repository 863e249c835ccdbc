#include "qfelab/cli/dispatch.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qfelab/channels.hpp"
#include "qfelab/chanopt.hpp"
#include "qfelab/errors.hpp"
#include "qfelab/games/attacks.hpp"
#include "qfelab/games/cpa.hpp"
#include "qfelab/games/decoding.hpp"
#include "qfelab/haar.hpp"
#include "qfelab/parallel.hpp"
#include "qfelab/prs.hpp"

namespace qfelab::cli {

namespace {

struct Params {
  std::optional<int> n;
  std::optional<int> m;
  std::optional<int> lambda;
  std::optional<std::size_t> samples;
  std::optional<std::size_t> trials;
  std::optional<std::size_t> iters;
  std::optional<std::size_t> restarts;
  std::uint64_t seed = 0;
  std::vector<double> eps;
  std::string out = ".";
  std::string format = "csv";
  unsigned threads = 0;
  std::string kind;
};

struct Outcome {
  std::string csv;
  std::string summary;
  bool pass = true;
  // Optional extra file (name suffix, content), e.g. a transcript.
  std::string extra_suffix;
  std::string extra_content;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

const char* verdict(bool pass) { return pass ? "PASS" : "FAIL"; }

// Rows of the (experiment, seeds, outcome_frequency, stderr, bound) batch schema.
class BatchTable {
 public:
  void add(const std::string& experiment, std::size_t seeds, double frequency, double stderr_value,
           double bound) {
    rows_ << experiment << ',' << seeds << ',' << fmt(frequency) << ',' << fmt(stderr_value) << ','
          << fmt(bound) << '\n';
  }
  std::string csv() const {
    return "# schema=1\nexperiment,seeds,outcome_frequency,stderr,bound\n" + rows_.str();
  }

 private:
  std::ostringstream rows_;
};

struct Proportion {
  double frequency;
  double std_error;
};

Proportion proportion(std::size_t hits, std::size_t trials) {
  const double p = static_cast<double>(hits) / static_cast<double>(trials);
  const double se = trials > 1 ? std::sqrt(p * (1.0 - p) / static_cast<double>(trials - 1)) : 0.0;
  return {p, se};
}

// ------------------------------------------------------------ subcommands

Outcome run_fidelity_bound(const Params& p) {
  const int n = p.n.value_or(2);
  const int m = p.m.value_or(1);
  const FidelityBound bound = incompressibility_bound(n, m);
  std::vector<CompressorKind> kinds{CompressorKind::projection, CompressorKind::trace_out,
                                    CompressorKind::keyed};
  if (!p.kind.empty()) kinds = {parse_compressor_kind(p.kind)};
  const int lambda = p.lambda.value_or(std::min(m, 8));
  const PrsFamily family(lambda, n);

  std::ostringstream csv;
  csv << "# schema=1\nn,m,kind,favg,favg_bound\n";
  double worst = 0.0;
  for (CompressorKind kind : kinds) {
    const CompressorPair pair = make_compressor(kind, n, m, &family);
    const double favg = pair.average_fidelity();
    worst = std::max(worst, favg);
    csv << n << ',' << m << ',' << to_string(kind) << ',' << fmt(favg) << ',' << fmt(bound.favg_bound) << '\n';
  }
  Outcome o;
  o.csv = csv.str();
  o.pass = worst <= bound.favg_bound + 1e-6;
  o.summary = "fidelity-bound n=" + std::to_string(n) + " m=" + std::to_string(m) + " max_favg=" + fmt(worst) +
              " F_avg <= " + fmt(bound.favg_bound) + " " + verdict(o.pass);
  return o;
}

Outcome run_chanopt(const Params& p) {
  const int n = p.n.value_or(2);
  const int m = p.m.value_or(1);
  const OptimizationResult result =
      optimize_compression(n, m, p.iters.value_or(300), p.restarts.value_or(8), SeededSampler(p.seed));
  Outcome o;
  o.csv = result.trace.to_csv();
  o.pass = result.trace.best_favg <= result.trace.bound.favg_bound + 1e-6;
  o.summary = "chanopt n=" + std::to_string(n) + " m=" + std::to_string(m) +
              " best_favg=" + fmt(result.trace.best_favg) + " bound=" + fmt(result.trace.bound.favg_bound) + " " +
              verdict(o.pass);
  return o;
}

Outcome run_levy(const Params& p) {
  const int n = p.n.value_or(8);
  const std::vector<double> eps = p.eps.empty() ? std::vector<double>{0.05, 0.1, 0.2} : p.eps;
  const KrausChannel channel = KrausChannel::trace_and_reattach(n, 1);
  const ConcentrationReport report =
      concentration_experiment(channel, p.samples.value_or(10000), eps, SeededSampler(p.seed));
  Outcome o;
  o.csv = report.to_csv();
  o.pass = report.within_levy_bound();
  o.summary = "levy n=" + std::to_string(n) + " mean=" + fmt(report.empirical_mean) +
              " std=" + fmt(report.empirical_std) + " tails within Levy bound " + verdict(o.pass);
  return o;
}

Outcome run_prs_distinguish(const Params& p) {
  const int n = p.n.value_or(4);
  const int m = p.m.value_or(2);
  const CompressorKind kind = parse_compressor_kind(p.kind.empty() ? "trace_out" : p.kind);
  const int lambda = p.lambda.value_or(kind == CompressorKind::keyed ? m : 8);
  const PrsFamily family(lambda, n);
  const CompressorPair pair = make_compressor(kind, n, m, &family);
  const DistinguisherResult r =
      distinguisher_advantage(pair, family, p.trials.value_or(10000), SeededSampler(p.seed));
  Outcome o;
  o.csv = r.to_csv();
  o.pass = std::abs(r.win_prob - r.predicted_win()) <= 5.0 * r.combined_stderr() + 1e-12;
  o.summary = "prs-distinguish kind=" + std::string(to_string(kind)) + " win_prob=" + fmt(r.win_prob) +
              " predicted=" + fmt(r.predicted_win()) + " " + verdict(o.pass);
  return o;
}

Outcome run_sim_compressor(const Params& p) {
  const int s = p.n.value_or(6);
  const int t = p.m.value_or(s - 1);
  if (t >= s) throw std::invalid_argument("sim-compressor: scheme is not succinct (t >= s), refused as vacuous");
  const SeededSampler root(p.seed);
  const games::SuccinctQfeStub stub(s, t, root.child(0).id());
  const PrsFamily family(p.lambda.value_or(8), s);
  const games::SimCompressorReport report =
      games::sim_compressor_experiment(stub, family, p.samples.value_or(2000), root.child(1));
  Outcome o;
  o.csv = report.to_csv();
  o.pass = report.impossibility_confirmed() && report.f_prs <= report.favg_bound + 5.0 * report.f_prs_stderr;
  o.summary = "sim-compressor " + report.summary() + " " + verdict(o.pass);
  return o;
}

Outcome run_attack_m1ad(const Params& p) {
  const int n = p.n.value_or(8);
  const int q = p.m.value_or(2);
  const std::size_t trials = p.trials.value_or(1000);
  const SeededSampler root(p.seed);
  const games::ToyQfe scheme;

  std::size_t real_hits = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    SeededSampler local = root.child(0).child(t);
    real_hits += static_cast<std::size_t>(games::attack_m1ad(scheme, n, nullptr, local));
  }
  const Proportion real = proportion(real_hits, trials);

  const games::HaarCodebookCompressor simulator(q, root.child(2).id());
  const games::RecoveryEstimate ideal = games::recovery_experiment(simulator, n, trials, root.child(1));

  BatchTable table;
  table.add("m1ad-real", trials, real.frequency, real.std_error, 1.0);
  table.add("m1ad-ideal", trials, ideal.success, ideal.std_error, ideal.cap);
  Outcome o;
  o.csv = table.csv();
  o.pass = real_hits == trials && ideal.success <= ideal.cap + 5.0 * ideal.std_error;
  o.summary = "attack-m1ad real=" + std::to_string(real_hits) + "/" + std::to_string(trials) +
              " ideal_success=" + fmt(ideal.success) + " cap=" + fmt(ideal.cap) + " " + verdict(o.pass);
  return o;
}

Outcome run_attack_1mna(const Params& p) {
  const games::ToyQfe qfe;
  const games::ToyPke pke;
  const auto n = static_cast<std::size_t>(p.n.value_or(qfe.proof_message_count()));
  const std::size_t trials = p.trials.value_or(1000);
  const int q = p.m.value_or(2);
  const int recovery_bits = 8;
  const SeededSampler root(p.seed);

  std::size_t zeros = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    zeros += games::attack_1mna(qfe, pke, nullptr, n, 0, root.child(0).child(t)).guess == 0 ? 1 : 0;
  }
  std::size_t bottoms = 0;
  games::OversizedSimulator oversized;
  for (std::size_t t = 0; t < trials; ++t) {
    const games::OneMnaRun run = games::attack_1mna(qfe, pke, &oversized, n, 1, root.child(1).child(t));
    bottoms += run.bottom && run.guess == 1 ? 1 : 0;
  }
  const games::HaarCodebookCompressor simulator(q, root.child(3).id());
  const games::RecoveryEstimate recovery =
      games::attack_1mna_recovery(simulator, recovery_bits, trials, root.child(2));

  const Proportion real = proportion(zeros, trials);
  const Proportion bottom = proportion(bottoms, trials);
  BatchTable table;
  table.add("1mna-modified-real-b0", trials, real.frequency, real.std_error, 1.0);
  table.add("1mna-oversized-bottom", trials, bottom.frequency, bottom.std_error, 1.0);
  table.add("1mna-recovery-b1", trials, recovery.success, recovery.std_error, recovery.cap);
  Outcome o;
  o.csv = table.csv();
  o.pass = zeros == trials && bottoms == trials &&
           recovery.success <= recovery.cap + 5.0 * recovery.std_error;
  o.summary = "attack-1mna n=" + std::to_string(n) + " b0_zero=" + std::to_string(zeros) + "/" +
              std::to_string(trials) + " bottom=" + std::to_string(bottoms) + "/" + std::to_string(trials) +
              " recovery=" + fmt(recovery.success) + " cap=" + fmt(recovery.cap) + " " + verdict(o.pass);
  return o;
}

Outcome run_hybrid(const Params& p) {
  const auto n = static_cast<std::size_t>(p.n.value_or(4));
  if (n < 1) throw std::invalid_argument("hybrid: need at least one key");
  const std::size_t trials = p.trials.value_or(100);
  const SeededSampler root(p.seed);
  const games::ToyPke pke;

  std::vector<std::size_t> ones(n + 2, 0);
  std::size_t reduction_equal = 0;
  std::size_t boundary_equal = 0;
  std::size_t single_key_equal = 0;
  std::string jsonl;
  for (std::size_t t = 0; t < trials; ++t) {
    const SeededSampler seed = root.child(t);
    games::CountingAdversary adversary(n);
    std::vector<games::Transcript> hybrids(n + 2);
    for (std::size_t j = 1; j <= n + 1; ++j) {
      hybrids[j] = games::hybrid_h(j, pke, adversary, seed);
      ones[j] += static_cast<std::size_t>(hybrids[j].outcome);
    }
    bool all = true;
    for (std::size_t j = 1; j <= n; ++j) {
      const games::ReductionRun r0 = games::reduction_d(pke, adversary, j, 0, seed);
      const games::ReductionRun r1 = games::reduction_d(pke, adversary, j, 1, seed);
      all = all && r0.inner.same_protocol(hybrids[j]) && r1.inner.same_protocol(hybrids[j + 1]);
      if (t == 0 && j == 1) jsonl = r0.inner.to_jsonl();
    }
    reduction_equal += all ? 1 : 0;

    games::CpaOptions zero;
    zero.forced_bit = 0;
    games::CpaOptions one;
    one.forced_bit = 1;
    const bool boundary = games::run_mk_cpa(pke, adversary, seed, zero).same_protocol(hybrids[1]) &&
                          games::run_mk_cpa(pke, adversary, seed, one).same_protocol(hybrids[n + 1]);
    boundary_equal += boundary ? 1 : 0;

    games::CountingAdversary single(1);
    single_key_equal +=
        games::run_mk_cpa(pke, single, seed).same_protocol(games::run_cpa(pke, single, seed)) ? 1 : 0;
  }

  BatchTable table;
  for (std::size_t j = 1; j <= n + 1; ++j) {
    const Proportion h = proportion(ones[j], trials);
    table.add("H" + std::to_string(j), trials, h.frequency, h.std_error, 0.0);
  }
  table.add("reduction-equals-hybrid", trials, proportion(reduction_equal, trials).frequency, 0.0, 1.0);
  table.add("boundary-equals-mk-cpa", trials, proportion(boundary_equal, trials).frequency, 0.0, 1.0);
  table.add("single-key-mk-cpa-equals-cpa", trials, proportion(single_key_equal, trials).frequency, 0.0, 1.0);

  Outcome o;
  o.csv = table.csv();
  o.pass = reduction_equal == trials && boundary_equal == trials && single_key_equal == trials;
  o.summary = "hybrid n=" + std::to_string(n) + " reduction=" + std::to_string(reduction_equal) + "/" +
              std::to_string(trials) + " boundary=" + std::to_string(boundary_equal) + "/" +
              std::to_string(trials) + " single-key=" + std::to_string(single_key_equal) + "/" +
              std::to_string(trials) + " " + verdict(o.pass);
  o.extra_suffix = ".jsonl";
  o.extra_content = jsonl;
  return o;
}

Outcome run_pgm_cap(const Params& p) {
  const SeededSampler root(p.seed);
  std::ostringstream csv;
  csv << "# schema=1\nmessages,dim,pgm_success,cap\n";
  bool pass = true;
  double worst_gap = -1.0;
  std::uint64_t index = 0;
  for (int bits : {4, 6, 8}) {
    for (int qubits : {1, 2}) {
      const games::HaarCodebookCompressor codebook(qubits, root.child(index++).id());
      const double success = games::pgm_success(games::compressor_ensemble(codebook, bits));
      const std::uint64_t messages = std::uint64_t{1} << bits;
      const std::uint64_t dim = dimension_of(qubits);
      const double cap = games::guessing_upper_bound(messages, dim);
      pass = pass && success <= cap + 1e-9;
      worst_gap = std::max(worst_gap, success - cap);
      csv << messages << ',' << dim << ',' << fmt(success) << ',' << fmt(cap) << '\n';
    }
  }
  Outcome o;
  o.csv = csv.str();
  o.pass = pass;
  o.summary = "pgm-cap max(success - K/N)=" + fmt(worst_gap) + " " + verdict(pass);
  return o;
}

// ------------------------------------------------------------ output

nlohmann::json csv_to_json(const std::string& csv) {
  nlohmann::json doc;
  std::istringstream in(csv);
  std::string line;
  std::vector<std::string> header;
  doc["rows"] = nlohmann::json::array();
  const auto split = [](const std::string& s) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(item);
    return parts;
  };
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find("schema=");
      if (eq != std::string::npos) doc["schema"] = std::stoi(line.substr(eq + 7));
      continue;
    }
    if (header.empty()) {
      header = split(line);
      continue;
    }
    const std::vector<std::string> cells = split(line);
    nlohmann::json row = nlohmann::json::object();
    for (std::size_t i = 0; i < header.size() && i < cells.size(); ++i) {
      char* end = nullptr;
      const double v = std::strtod(cells[i].c_str(), &end);
      if (!cells[i].empty() && end != nullptr && *end == '\0') {
        row[header[i]] = v;
      } else {
        row[header[i]] = cells[i];
      }
    }
    doc["rows"].push_back(row);
  }
  return doc;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write " + path.string());
  file << content;
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"qfelab: incompressibility and QFE impossibility experiments"};
  app.set_config("--config", "", "flat key=value file supplying defaults; flags override");
  app.require_subcommand(1, 1);

  Params p;
  std::string format = "csv";
  app.add_option("--n", p.n, "qubits / message count / keys, per subcommand");
  app.add_option("--m", p.m, "compressed qubits / simulator qubits");
  app.add_option("--lambda", p.lambda, "PRS key length");
  app.add_option("--samples", p.samples, "Monte-Carlo samples");
  app.add_option("--trials", p.trials, "seeded trials");
  app.add_option("--iters", p.iters, "optimizer iterations");
  app.add_option("--restarts", p.restarts, "optimizer restarts");
  app.add_option("--seed", p.seed, "root seed")->required();
  app.add_option("--eps", p.eps, "tail thresholds")->delimiter(',');
  app.add_option("--out", p.out, "output directory");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads", p.threads, "worker cap (0 = hardware)");
  app.add_option("--kind", p.kind, "compressor kind: projection, trace_out, keyed");

  const std::map<std::string, std::function<Outcome(const Params&)>> commands{
      {"fidelity-bound", run_fidelity_bound}, {"chanopt", run_chanopt},
      {"levy", run_levy},                     {"prs-distinguish", run_prs_distinguish},
      {"sim-compressor", run_sim_compressor}, {"attack-m1ad", run_attack_m1ad},
      {"attack-1mna", run_attack_1mna},       {"hybrid", run_hybrid},
      {"pgm-cap", run_pgm_cap},
  };
  const std::map<std::string, std::string> help{
      {"fidelity-bound", "exact F_avg of built-in compressors against the (2^m+1)/(2^n+1) ceiling"},
      {"chanopt", "gradient search over isometric compress/decompress pairs"},
      {"levy", "concentration of f(psi) under Haar sampling vs the Levy tail"},
      {"prs-distinguish", "swap-test PRS/Haar distinguisher built from a compressor"},
      {"sim-compressor", "succinct QFE simulator read as a compressor"},
      {"attack-m1ad", "many-ciphertext adaptive attack, real and ideal worlds"},
      {"attack-1mna", "one-key non-adaptive attack through the multi-key PKE game"},
      {"hybrid", "hybrid chain and reduction transcripts for multi-key CPA"},
      {"pgm-cap", "pretty-good-measurement decoding vs the K/N guessing cap"},
  };
  for (const auto& [name, fn] : commands) app.add_subcommand(name, help.at(name))->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }
  p.format = format;
  const std::string name = app.get_subcommands().front()->get_name();

  Outcome outcome;
  try {
    if (p.threads > 0) set_max_threads(p.threads);
    outcome = commands.at(name)(p);
  } catch (const InvariantViolation& e) {
    err << name << ": invariant violation: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const ProtocolViolation& e) {
    err << name << ": protocol violation: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const std::invalid_argument& e) {
    err << name << ": parameter violation: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    err << name << ": parameter violation: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    const std::filesystem::path dir(p.out);
    std::filesystem::create_directories(dir);
    const std::string stem = name + "-" + std::to_string(p.seed);
    if (p.format == "json") {
      write_file(dir / (stem + ".json"), csv_to_json(outcome.csv).dump(2) + "\n");
    } else {
      write_file(dir / (stem + ".csv"), outcome.csv);
    }
    if (!outcome.extra_suffix.empty()) write_file(dir / (stem + outcome.extra_suffix), outcome.extra_content);
  } catch (const std::exception& e) {
    err << name << ": " << e.what() << '\n';
    return kExitUsage;
  }
  out << outcome.summary << '\n';
  return outcome.pass ? kExitPass : kExitInvariant;
}

}  // namespace qfelab::cli
