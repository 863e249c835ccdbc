#include "qfelab/channels.hpp"

#include <cmath>
#include <string>

#include "qfelab/parallel.hpp"

namespace qfelab {

namespace {

void require_square(const KrausChannel& channel, const char* op) {
  if (!channel.is_square()) {
    throw DimensionMismatch(std::string(op) + ": channel maps " + std::to_string(channel.n_in()) +
                            " qubits to " + std::to_string(channel.n_out()));
  }
}

}  // namespace

KrausChannel::KrausChannel(std::vector<Matrix> kraus_ops, int n_in, int n_out)
    : ops_(std::move(kraus_ops)), n_in_(n_in), n_out_(n_out) {
  if (ops_.empty()) throw InvalidState("channel needs at least one Kraus operator");
  const auto din = static_cast<Eigen::Index>(dimension_of(n_in));
  const auto dout = static_cast<Eigen::Index>(dimension_of(n_out));
  Matrix completeness = Matrix::Zero(din, din);
  for (const Matrix& k : ops_) {
    if (k.rows() != dout || k.cols() != din) {
      throw DimensionMismatch("Kraus operator has shape " + std::to_string(k.rows()) + "x" +
                              std::to_string(k.cols()) + ", expected " + std::to_string(dout) +
                              "x" + std::to_string(din));
    }
    completeness.noalias() += k.adjoint() * k;
  }
  const double err = (completeness - Matrix::Identity(din, din)).cwiseAbs().maxCoeff();
  if (err > kTolerance) {
    throw InvalidState("Kraus completeness violated by " + std::to_string(err));
  }
}

KrausChannel KrausChannel::identity(int n) {
  const auto d = static_cast<Eigen::Index>(dimension_of(n));
  return KrausChannel({Matrix::Identity(d, d)}, n, n);
}

KrausChannel KrausChannel::unitary(const Matrix& u) {
  const int n = qubits_of(static_cast<std::size_t>(u.rows()));
  return KrausChannel({u}, n, n);
}

KrausChannel KrausChannel::completely_depolarizing(int n) {
  const auto d = static_cast<Eigen::Index>(dimension_of(n));
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  std::vector<Matrix> ops;
  ops.reserve(static_cast<std::size_t>(d * d));
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      Matrix k = Matrix::Zero(d, d);
      k(i, j) = scale;
      ops.push_back(std::move(k));
    }
  }
  return KrausChannel(std::move(ops), n, n);
}

KrausChannel KrausChannel::dephasing(int n) {
  const auto d = static_cast<Eigen::Index>(dimension_of(n));
  std::vector<Matrix> ops;
  for (Eigen::Index i = 0; i < d; ++i) {
    Matrix k = Matrix::Zero(d, d);
    k(i, i) = 1.0;
    ops.push_back(std::move(k));
  }
  return KrausChannel(std::move(ops), n, n);
}

KrausChannel KrausChannel::reset(int n) {
  const auto d = static_cast<Eigen::Index>(dimension_of(n));
  std::vector<Matrix> ops;
  for (Eigen::Index i = 0; i < d; ++i) {
    Matrix k = Matrix::Zero(d, d);
    k(0, i) = 1.0;
    ops.push_back(std::move(k));
  }
  return KrausChannel(std::move(ops), n, n);
}

KrausChannel KrausChannel::trace_and_reattach(int n, int traced) {
  if (traced < 1 || traced > n) throw std::invalid_argument("trace_and_reattach: bad qubit count");
  const auto d = static_cast<Eigen::Index>(dimension_of(n));
  const Eigen::Index e = Eigen::Index{1} << traced;
  const Eigen::Index k = d / e;
  // K_j = I_k (x) |0><j| on the last `traced` qubits.
  std::vector<Matrix> ops;
  for (Eigen::Index j = 0; j < e; ++j) {
    Matrix op = Matrix::Zero(d, d);
    for (Eigen::Index a = 0; a < k; ++a) op(a * e, a * e + j) = 1.0;
    ops.push_back(std::move(op));
  }
  return KrausChannel(std::move(ops), n, n);
}

KrausChannel KrausChannel::random(int n_in, int n_out, int count, SeededSampler& sampler) {
  const auto din = static_cast<Eigen::Index>(dimension_of(n_in));
  const auto dout = static_cast<Eigen::Index>(dimension_of(n_out));
  if (count < 1 || count * dout < din) {
    throw std::invalid_argument("random channel: need count * d_out >= d_in");
  }
  const Matrix u = sample_haar_unitary_dim(static_cast<std::size_t>(count * dout), sampler);
  std::vector<Matrix> ops;
  for (int i = 0; i < count; ++i) ops.push_back(u.block(i * dout, 0, dout, din));
  return KrausChannel(std::move(ops), n_in, n_out);
}

DensityOperator KrausChannel::apply(const DensityOperator& rho) const {
  if (rho.dim() != d_in()) {
    throw DimensionMismatch("apply: state has dimension " + std::to_string(rho.dim()) +
                            ", channel expects " + std::to_string(d_in()));
  }
  const auto dout = static_cast<Eigen::Index>(d_out());
  Matrix out = Matrix::Zero(dout, dout);
  for (const Matrix& k : ops_) out.noalias() += k * rho.matrix() * k.adjoint();
  return DensityOperator::trusted(0.5 * (out + out.adjoint()));
}

double KrausChannel::self_fidelity(const PureState& psi) const {
  if (!is_square()) throw DimensionMismatch("self_fidelity: channel is not square");
  if (psi.dim() != d_in()) throw DimensionMismatch("self_fidelity: dimension mismatch");
  const Vector& v = psi.amplitudes();
  double f = 0.0;
  for (const Matrix& k : ops_) f += std::norm(v.dot(k * v));
  return f;
}

KrausChannel compose(const KrausChannel& second, const KrausChannel& first) {
  if (first.n_out() != second.n_in()) {
    throw DimensionMismatch("compose: first outputs " + std::to_string(first.n_out()) +
                            " qubits, second expects " + std::to_string(second.n_in()));
  }
  std::vector<Matrix> ops;
  ops.reserve(first.kraus_ops().size() * second.kraus_ops().size());
  for (const Matrix& a : first.kraus_ops()) {
    for (const Matrix& b : second.kraus_ops()) ops.push_back(b * a);
  }
  return KrausChannel(std::move(ops), first.n_in(), second.n_out());
}

double entanglement_fidelity(const KrausChannel& channel) {
  require_square(channel, "entanglement_fidelity");
  const double d = static_cast<double>(channel.d_in());
  double acc = 0.0;
  for (const Matrix& k : channel.kraus_ops()) acc += std::norm(k.trace());
  return acc / (d * d);
}

double entanglement_fidelity_choi(const KrausChannel& channel) {
  require_square(channel, "entanglement_fidelity_choi");
  const int n = channel.n_in();
  if (2 * n > kMaxQubits) throw DimensionMismatch("Choi state exceeds the qubit cap");
  const auto d = static_cast<Eigen::Index>(channel.d_in());

  Vector phi = Vector::Zero(d * d);
  for (Eigen::Index i = 0; i < d; ++i) phi(i * d + i) = 1.0;
  const PureState phi_plus = PureState::normalized(phi);

  // Extend each Kraus operator to I (x) K on reference (x) system.
  std::vector<Matrix> extended;
  for (const Matrix& k : channel.kraus_ops()) {
    Matrix big = Matrix::Zero(d * d, d * d);
    for (Eigen::Index r = 0; r < d; ++r) big.block(r * d, r * d, d, d) = k;
    extended.push_back(std::move(big));
  }
  const KrausChannel ext(std::move(extended), 2 * n, 2 * n);
  const DensityOperator choi = ext.apply(phi_plus.density());
  return fidelity(phi_plus, choi);
}

double average_fidelity_exact(const KrausChannel& channel) {
  const double d = static_cast<double>(channel.d_in());
  return (d * entanglement_fidelity(channel) + 1.0) / (d + 1.0);
}

MonteCarloEstimate average_fidelity_mc(const KrausChannel& channel, std::size_t samples,
                                       const SeededSampler& sampler) {
  require_square(channel, "average_fidelity_mc");
  if (samples < 2) throw std::invalid_argument("average_fidelity_mc: need at least 2 samples");
  std::vector<double> values(samples);
  parallel_for(samples, [&](std::size_t i) {
    SeededSampler local = sampler.child(i);
    values[i] = channel.self_fidelity(sample_haar_state(channel.n_in(), local));
  });
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(samples);
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= static_cast<double>(samples - 1);
  return {mean, std::sqrt(var / static_cast<double>(samples))};
}

FidelityBound incompressibility_bound(int n, int m) {
  if (m < 1 || n < 1) throw std::invalid_argument("incompressibility_bound: need m, n >= 1");
  if (m > n) throw std::invalid_argument("incompressibility_bound: m > n");
  const double k = std::ldexp(1.0, m);
  const double d = std::ldexp(1.0, n);
  return {n, m, k / d, (k + 1.0) / (d + 1.0)};
}

}  // namespace qfelab
