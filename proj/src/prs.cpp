#include "qfelab/prs.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qfelab/hash.hpp"
#include "qfelab/parallel.hpp"

namespace qfelab {

namespace {

std::uint64_t reduce_key(std::uint64_t bits, int lambda) {
  return lambda == 64 ? bits : bits & ((std::uint64_t{1} << lambda) - 1);
}

double sample_stderr(const std::vector<double>& values, double mean) {
  if (values.size() < 2) return 0.0;
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= static_cast<double>(values.size() - 1);
  return std::sqrt(var / static_cast<double>(values.size()));
}

double mean_of(const std::vector<double>& values) {
  double acc = 0.0;
  for (double v : values) acc += v;
  return values.empty() ? 0.0 : acc / static_cast<double>(values.size());
}

}  // namespace

PrsKey::PrsKey(std::uint64_t key_bits, int key_lambda) : bits(0), lambda(key_lambda) {
  if (key_lambda < 1 || key_lambda > 64) throw std::invalid_argument("PrsKey: lambda outside [1, 64]");
  bits = reduce_key(key_bits, key_lambda);
}

int prf_bit(const PrsKey& key, std::uint64_t x, int n) {
  if (x >= dimension_of(n)) throw std::out_of_range("prf_bit: x outside [0, 2^n)");
  return static_cast<int>(mix64(key.bits ^ (x * kGoldenGamma)) & 1U);
}

PureState binary_phase_state(int n, const std::vector<int>& phase_bits) {
  const auto d = static_cast<Eigen::Index>(dimension_of(n));
  if (static_cast<Eigen::Index>(phase_bits.size()) != d) {
    throw DimensionMismatch("binary_phase_state: need 2^n phase bits");
  }
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  Vector v(d);
  for (Eigen::Index x = 0; x < d; ++x) v(x) = phase_bits[static_cast<std::size_t>(x)] ? -amp : amp;
  return PureState(std::move(v));
}

PrsFamily::PrsFamily(int lambda, int n) : lambda_(lambda), n_(n) {
  if (lambda < 1 || lambda > 64) throw std::invalid_argument("PrsFamily: lambda outside [1, 64]");
  if (n < 1 || n > kMaxQubits) throw std::out_of_range("PrsFamily: n outside [1, 12]");
}

std::uint64_t PrsFamily::key_count() const {
  if (lambda_ >= 64) throw std::out_of_range("PrsFamily: key space of 2^64 is not enumerable");
  return std::uint64_t{1} << lambda_;
}

PureState PrsFamily::generate(const PrsKey& key) const {
  if (key.lambda != lambda_) throw std::invalid_argument("prs_gen: key length does not match family");
  const std::size_t d = dimension_of(n_);
  std::vector<int> phases(d);
  for (std::size_t x = 0; x < d; ++x) phases[x] = prf_bit(key, x, n_);
  return binary_phase_state(n_, phases);
}

PrsKey PrsFamily::random_key(SeededSampler& sampler) const { return PrsKey(sampler.bits(), lambda_); }

double swap_test_accept_prob(const DensityOperator& rho, const DensityOperator& sigma) {
  if (rho.dim() != sigma.dim()) throw DimensionMismatch("swap test: dimension mismatch");
  const double overlap = (rho.matrix().cwiseProduct(sigma.matrix().transpose())).sum().real();
  return std::clamp(0.5 * (1.0 + overlap), 0.5, 1.0);
}

int swap_test_sample(const DensityOperator& rho, const DensityOperator& sigma,
                     SeededSampler& sampler) {
  return sampler.bernoulli(swap_test_accept_prob(rho, sigma)) ? 1 : 0;
}

double DistinguisherResult::combined_stderr() const {
  return std::sqrt(win_stderr * win_stderr +
                   (f_prs_stderr * f_prs_stderr + f_haar_stderr * f_haar_stderr) / 16.0);
}

std::string DistinguisherResult::to_csv() const {
  std::ostringstream out;
  out.precision(12);
  out << "# schema=1\n"
      << "n,m,lambda,trials,f_prs,f_haar,win_prob,stderr\n"
      << n << ',' << m << ',' << lambda << ',' << trials << ',' << f_prs << ',' << f_haar << ','
      << win_prob << ',' << combined_stderr() << '\n';
  return out.str();
}

DistinguisherResult distinguisher_advantage(const CompressorPair& pair, const PrsFamily& family,
                                            std::size_t trials, const SeededSampler& sampler) {
  if (pair.comp.n_in() != family.n() || pair.decomp.n_out() != family.n()) {
    throw DimensionMismatch("distinguisher: compressor does not act on family states");
  }
  if (trials < 2) throw std::invalid_argument("distinguisher: need at least 2 trials");
  std::vector<double> f_prs(trials), f_haar(trials), win(trials);
  parallel_for(trials, [&](std::size_t t) {
    SeededSampler local = sampler.child(t);
    const PureState prs = family.generate(family.random_key(local));
    const PureState haar = sample_haar_state(family.n(), local);
    f_prs[t] = pair.self_fidelity(prs);
    f_haar[t] = pair.self_fidelity(haar);
    const int b = static_cast<int>(t % 2);  // 0: PRS branch, 1: Haar branch
    const double accept = 0.5 * (1.0 + (b == 0 ? f_prs[t] : f_haar[t]));
    const int accepted = local.bernoulli(accept) ? 1 : 0;
    const int guess = accepted ? 0 : 1;
    win[t] = guess == b ? 1.0 : 0.0;
  });
  DistinguisherResult r;
  r.n = family.n();
  r.m = pair.comp.n_out();
  r.lambda = family.lambda();
  r.trials = trials;
  r.f_prs = mean_of(f_prs);
  r.f_prs_stderr = sample_stderr(f_prs, r.f_prs);
  r.f_haar = mean_of(f_haar);
  r.f_haar_stderr = sample_stderr(f_haar, r.f_haar);
  r.win_prob = mean_of(win);
  r.win_stderr = sample_stderr(win, r.win_prob);
  return r;
}

}  // namespace qfelab
