#include "qfelab/haar.hpp"

#include <cmath>

#include "qfelab/hash.hpp"

namespace qfelab {

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream) {
  // One mixed word instead of seed_seq: child samplers are created per sample, and
  // seed_seq expansion dominated their cost.
  return std::mt19937_64(mix64(combine64(seed, stream) ^ 0x5eed5eed5eed5eedULL));
}

// Box-Muller on the sampler's own uniforms keeps the stream layout independent
// of the standard library's normal_distribution caching.
Complex complex_gaussian(SeededSampler& sampler) {
  return {sampler.normal(), sampler.normal()};
}

}  // namespace

SeededSampler::SeededSampler(std::uint64_t seed, std::uint64_t stream_index)
    : seed_(seed), stream_index_(stream_index), engine_(make_engine(seed, stream_index)) {}

SeededSampler SeededSampler::child(std::uint64_t index) const {
  return SeededSampler(combine64(seed_, stream_index_), index);
}

std::uint64_t SeededSampler::id() const { return combine64(seed_, stream_index_); }

double SeededSampler::uniform() {
  // 53 random mantissa bits in [0, 1).
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double SeededSampler::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

bool SeededSampler::bernoulli(double p) { return uniform() < p; }

std::uint64_t SeededSampler::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("below: bound must be positive");
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t v = engine_();
  while (v >= limit) v = engine_();
  return v % bound;
}

PureState sample_haar_state(int qubits, SeededSampler& sampler) {
  if (qubits < 1 || qubits > kMaxQubits) throw std::out_of_range("sample_haar_state: n out of range");
  const auto d = static_cast<Eigen::Index>(dimension_of(qubits));
  Vector v(d);
  for (Eigen::Index i = 0; i < d; ++i) v(i) = complex_gaussian(sampler);
  return PureState::normalized(std::move(v));
}

Matrix sample_haar_unitary_dim(std::size_t dim, SeededSampler& sampler) {
  if (dim == 0) throw std::invalid_argument("sample_haar_unitary: zero dimension");
  const auto d = static_cast<Eigen::Index>(dim);
  Matrix g(d, d);
  for (Eigen::Index c = 0; c < d; ++c) {
    for (Eigen::Index r = 0; r < d; ++r) g(r, c) = complex_gaussian(sampler);
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(d, d);
  const Matrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < d; ++j) {
    const Complex rjj = r(j, j);
    const double mag = std::abs(rjj);
    // Q R = Q Lambda Lambda^-1 R with Lambda = diag(r_jj/|r_jj|).
    if (mag > 0.0) q.col(j) *= rjj / mag;
  }
  return q;
}

Matrix sample_haar_unitary(int qubits, SeededSampler& sampler) {
  if (qubits < 1 || qubits > kMaxQubits) {
    throw std::out_of_range("sample_haar_unitary: n out of range");
  }
  return sample_haar_unitary_dim(dimension_of(qubits), sampler);
}

double levy_tail_bound(double epsilon, double sphere_dim, double lipschitz) {
  if (epsilon < 0.0) throw std::invalid_argument("levy_tail_bound: epsilon must be >= 0");
  if (lipschitz <= 0.0) throw std::invalid_argument("levy_tail_bound: lipschitz must be > 0");
  return 2.0 * std::exp(-2.0 * kLevyConstant * (sphere_dim + 1.0) * epsilon * epsilon /
                        (lipschitz * lipschitz));
}

}  // namespace qfelab
