#include "qfelab/games/decoding.hpp"

#include <algorithm>
#include <cmath>

#include "qfelab/parallel.hpp"

namespace qfelab::games {

namespace {

constexpr double kSupportCut = 1e-12;

Matrix inverse_sqrt_on_support(const Matrix& s) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (s + s.adjoint()));
  Eigen::VectorXd values = solver.eigenvalues();
  for (double& v : values) v = v > kSupportCut ? 1.0 / std::sqrt(v) : 0.0;
  return solver.eigenvectors() * values.asDiagonal() * solver.eigenvectors().adjoint();
}

}  // namespace

void Ensemble::validate() const {
  if (entries.empty()) throw std::invalid_argument("ensemble is empty");
  double total = 0.0;
  for (const EnsembleEntry& e : entries) {
    if (e.state.dim() != entries.front().state.dim()) {
      throw DimensionMismatch("ensemble states have different dimensions");
    }
    if (e.prior < 0.0) throw InvalidState("ensemble prior is negative");
    total += e.prior;
  }
  if (std::abs(total - 1.0) > kTolerance) throw InvalidState("ensemble priors do not sum to 1");
}

std::size_t Ensemble::dim() const { return entries.front().state.dim(); }

PrettyGoodMeasurement::PrettyGoodMeasurement(const Ensemble& ensemble) {
  ensemble.validate();
  const auto d = static_cast<Eigen::Index>(ensemble.dim());
  Matrix s = Matrix::Zero(d, d);
  for (const EnsembleEntry& e : ensemble.entries) s.noalias() += e.prior * e.state.matrix();
  const Matrix root = inverse_sqrt_on_support(s);
  for (const EnsembleEntry& e : ensemble.entries) {
    elements_.push_back(e.prior * root * e.state.matrix() * root);
    priors_.push_back(e.prior);
    states_.push_back(e.state.matrix());
  }
}

double PrettyGoodMeasurement::outcome_probability(std::size_t i, const DensityOperator& rho) const {
  return std::max(0.0, elements_.at(i).cwiseProduct(rho.matrix().transpose()).sum().real());
}

std::size_t PrettyGoodMeasurement::measure(const DensityOperator& rho, SeededSampler& sampler) const {
  // Mass outside the PGM support (rounding only) maps to an out-of-range index.
  const double u = sampler.uniform();
  double acc = 0.0;
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    acc += outcome_probability(i, rho);
    if (u < acc) return i;
  }
  return elements_.size();
}

double PrettyGoodMeasurement::success_probability() const {
  double acc = 0.0;
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    acc += priors_[i] * std::max(0.0, elements_[i].cwiseProduct(states_[i].transpose()).sum().real());
  }
  return std::clamp(acc, 0.0, 1.0);
}

double pgm_success(const Ensemble& ensemble) { return PrettyGoodMeasurement(ensemble).success_probability(); }

double guessing_upper_bound(std::uint64_t messages, std::uint64_t dim) {
  if (messages < 1 || dim < 1) throw std::invalid_argument("guessing_upper_bound: need N, K >= 1");
  return std::min(1.0, static_cast<double>(dim) / static_cast<double>(messages));
}

double ns06_bound(double n_bits, double success_probability) {
  if (!(success_probability > 0.0) || success_probability > 1.0) {
    throw std::invalid_argument("ns06_bound: success probability outside (0, 1]");
  }
  return 0.5 * (n_bits - std::log2(1.0 / success_probability));
}

PrefixCompressor::PrefixCompressor(int qubits) : p_(qubits) {
  if (qubits < 1 || qubits > kMaxQubits) throw std::out_of_range("PrefixCompressor: bad qubit budget");
}

DensityOperator PrefixCompressor::encode(std::uint64_t message, int message_bits) const {
  const int keep = std::min(p_, message_bits);
  const std::uint64_t prefix = message >> (message_bits - keep);
  return PureState::basis(p_, prefix << (p_ - keep)).density();
}

HaarCodebookCompressor::HaarCodebookCompressor(int qubits, std::uint64_t seed) : p_(qubits), seed_(seed) {
  if (qubits < 1 || qubits > kMaxQubits) throw std::out_of_range("HaarCodebookCompressor: bad qubit budget");
}

DensityOperator HaarCodebookCompressor::encode(std::uint64_t message, int message_bits) const {
  SeededSampler sampler = SeededSampler(seed_, static_cast<std::uint64_t>(message_bits)).child(message);
  return sample_haar_state(p_, sampler).density();
}

Ensemble compressor_ensemble(const MessageCompressor& compressor, int message_bits) {
  if (message_bits < 0 || message_bits > kMaxQubits) {
    throw std::out_of_range("compressor_ensemble: message width outside [0, 12]");
  }
  const std::uint64_t count = std::uint64_t{1} << message_bits;
  Ensemble ensemble;
  for (std::uint64_t x = 0; x < count; ++x) {
    ensemble.entries.push_back({x, compressor.encode(x, message_bits), 1.0 / static_cast<double>(count)});
  }
  return ensemble;
}

RecoveryEstimate recovery_experiment(const MessageCompressor& compressor, int message_bits,
                                     std::size_t trials, const SeededSampler& sampler) {
  if (trials < 2) throw std::invalid_argument("recovery_experiment: need at least 2 trials");
  const Ensemble ensemble = compressor_ensemble(compressor, message_bits);
  const PrettyGoodMeasurement pgm(ensemble);
  const std::uint64_t count = std::uint64_t{1} << message_bits;
  std::vector<double> hits(trials);
  parallel_for(trials, [&](std::size_t t) {
    SeededSampler local = sampler.child(t);
    const std::uint64_t x = local.below(count);
    const std::size_t guess = pgm.measure(ensemble.entries[x].state, local);
    hits[t] = guess == x ? 1.0 : 0.0;
  });
  RecoveryEstimate est;
  est.trials = trials;
  for (double h : hits) est.success += h;
  est.success /= static_cast<double>(trials);
  est.std_error = std::sqrt(std::max(est.success * (1.0 - est.success), 0.0) /
                            static_cast<double>(trials - 1));
  est.exact = pgm.success_probability();
  est.cap = guessing_upper_bound(count, dimension_of(compressor.qubits()));
  return est;
}

}  // namespace qfelab::games
