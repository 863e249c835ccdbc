#include <cmath>
#include <sstream>

#include "qfelab/channels.hpp"
#include "qfelab/haar.hpp"
#include "qfelab/parallel.hpp"

namespace qfelab {

bool ConcentrationReport::within_levy_bound() const {
  for (const TailEntry& t : tails) {
    if (t.tail_frequency > t.levy_bound) return false;
  }
  return true;
}

std::string ConcentrationReport::to_csv() const {
  std::ostringstream out;
  out.precision(12);
  out << "# schema=1\n"
      << "n,samples,mean,std,epsilon,tail_frequency,levy_bound\n";
  for (const TailEntry& t : tails) {
    out << n << ',' << samples << ',' << empirical_mean << ',' << empirical_std << ','
        << t.epsilon << ',' << t.tail_frequency << ',' << t.levy_bound << '\n';
  }
  return out.str();
}

ConcentrationReport concentration_experiment(const KrausChannel& channel, std::size_t samples,
                                             const std::vector<double>& epsilons,
                                             const SeededSampler& sampler) {
  if (!channel.is_square()) {
    throw DimensionMismatch("concentration_experiment: channel must map n qubits to n qubits");
  }
  if (samples < 2) throw std::invalid_argument("concentration_experiment: need at least 2 samples");
  const int n = channel.n_in();
  std::vector<double> values(samples);
  parallel_for(samples, [&](std::size_t i) {
    SeededSampler local = sampler.child(i);
    values[i] = channel.self_fidelity(sample_haar_state(n, local));
  });

  ConcentrationReport report;
  report.n = n;
  report.samples = samples;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(samples);
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  report.empirical_mean = mean;
  report.empirical_std = std::sqrt(var / static_cast<double>(samples - 1));
  report.exact_mean = average_fidelity_exact(channel);

  // Complex pure states of dimension d live on the real sphere S^{2d-1}.
  const double sphere_dim = 2.0 * static_cast<double>(channel.d_in()) - 1.0;
  for (double eps : epsilons) {
    if (eps < 0.0) throw std::invalid_argument("concentration_experiment: epsilon must be >= 0");
    std::size_t hits = 0;
    for (double v : values) {
      if (std::abs(v - report.exact_mean) >= eps) ++hits;
    }
    TailEntry entry{eps, static_cast<double>(hits) / static_cast<double>(samples),
                    levy_tail_bound(eps, sphere_dim, kSelfFidelityLipschitz)};
    if (entry.tail_frequency > entry.levy_bound) {
      throw InvariantViolation("measured tail " + std::to_string(entry.tail_frequency) +
                               " exceeds Levy bound " + std::to_string(entry.levy_bound) +
                               " at eps=" + std::to_string(eps));
    }
    report.tails.push_back(entry);
  }
  return report;
}

}  // namespace qfelab
