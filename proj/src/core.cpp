#include "qfelab/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qfelab {

namespace {

bool is_power_of_two(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

Eigen::VectorXd hermitian_eigenvalues(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

void require_same_dim(std::size_t a, std::size_t b, const char* op) {
  if (a != b) {
    throw DimensionMismatch(std::string(op) + ": dimensions " + std::to_string(a) + " and " +
                            std::to_string(b) + " differ");
  }
}

}  // namespace

std::size_t dimension_of(int qubits) {
  if (qubits < 0 || qubits > kMaxQubits) {
    throw std::out_of_range("qubit count " + std::to_string(qubits) + " outside [0, " +
                            std::to_string(kMaxQubits) + "]");
  }
  return std::size_t{1} << qubits;
}

int qubits_of(std::size_t dim) {
  if (!is_power_of_two(dim)) {
    throw InvalidState("dimension " + std::to_string(dim) + " is not a power of two");
  }
  int n = 0;
  while ((std::size_t{1} << n) < dim) ++n;
  if (n > kMaxQubits) throw DimensionMismatch("dimension exceeds the qubit cap");
  return n;
}

// ---------------------------------------------------------------- PureState

PureState::PureState(Vector amplitudes) : amplitudes_(std::move(amplitudes)) {
  qubits_ = qubits_of(static_cast<std::size_t>(amplitudes_.size()));
  const double norm = amplitudes_.norm();
  if (std::abs(norm - 1.0) > kTolerance) {
    throw InvalidState("state norm " + std::to_string(norm) + " is not 1");
  }
}

PureState PureState::basis(int qubits, std::uint64_t index) {
  const std::size_t d = dimension_of(qubits);
  if (index >= d) throw std::out_of_range("basis index out of range");
  Vector v = Vector::Zero(static_cast<Eigen::Index>(d));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return PureState(std::move(v));
}

PureState PureState::normalized(Vector amplitudes) {
  const double norm = amplitudes.norm();
  if (norm == 0.0) throw InvalidState("cannot normalize the zero vector");
  amplitudes /= norm;
  return PureState(std::move(amplitudes));
}

DensityOperator PureState::density() const {
  return DensityOperator::trusted(amplitudes_ * amplitudes_.adjoint());
}

// ---------------------------------------------------------- DensityOperator

DensityOperator::DensityOperator(Matrix matrix, Unchecked) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols()) throw DimensionMismatch("density matrix is not square");
  qubits_ = qubits_of(static_cast<std::size_t>(matrix_.rows()));
}

DensityOperator::DensityOperator(Matrix matrix) : DensityOperator(std::move(matrix), Unchecked{}) {
  if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > kTolerance) {
    throw InvalidState("density matrix is not Hermitian");
  }
  const double tr = matrix_.trace().real();
  if (std::abs(tr - 1.0) > kTolerance) {
    throw InvalidState("density matrix trace " + std::to_string(tr) + " is not 1");
  }
  Eigen::VectorXd eig = hermitian_eigenvalues(0.5 * (matrix_ + matrix_.adjoint()));
  for (double& e : eig) {
    if (std::abs(e) < kEigenClip) e = 0.0;
  }
  if (eig.minCoeff() < -kTolerance) {
    throw InvalidState("density matrix has eigenvalue " + std::to_string(eig.minCoeff()));
  }
}

DensityOperator DensityOperator::trusted(Matrix matrix) {
  return DensityOperator(std::move(matrix), Unchecked{});
}

DensityOperator DensityOperator::maximally_mixed(int qubits) {
  const auto d = static_cast<Eigen::Index>(dimension_of(qubits));
  return trusted(Matrix::Identity(d, d) / static_cast<double>(d));
}

double DensityOperator::purity() const {
  // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
  return matrix_.squaredNorm();
}

// ---------------------------------------------------------------- Projector

Projector::Projector(Matrix matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols()) throw DimensionMismatch("projector is not square");
  if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > kTolerance) {
    throw InvalidState("projector is not Hermitian");
  }
  if ((matrix_ * matrix_ - matrix_).norm() > kTolerance) {
    throw InvalidState("projector is not idempotent");
  }
}

Projector Projector::identity(int qubits) {
  const auto d = static_cast<Eigen::Index>(dimension_of(qubits));
  return Projector(Matrix::Identity(d, d));
}

Projector Projector::onto(const PureState& state) {
  return Projector(state.amplitudes() * state.amplitudes().adjoint());
}

// --------------------------------------------------------------- operations

DensityOperator tensor_product(const DensityOperator& a, const DensityOperator& b) {
  if (a.qubits() + b.qubits() > kMaxQubits) {
    throw DimensionMismatch("tensor product exceeds the " + std::to_string(kMaxQubits) +
                            "-qubit cap");
  }
  const Matrix& ma = a.matrix();
  const Matrix& mb = b.matrix();
  const Eigen::Index db = mb.rows();
  Matrix out(ma.rows() * db, ma.cols() * db);
  for (Eigen::Index i = 0; i < ma.rows(); ++i) {
    for (Eigen::Index j = 0; j < ma.cols(); ++j) {
      out.block(i * db, j * db, db, db) = ma(i, j) * mb;
    }
  }
  return DensityOperator::trusted(std::move(out));
}

PureState tensor_product(const PureState& a, const PureState& b) {
  if (a.qubits() + b.qubits() > kMaxQubits) {
    throw DimensionMismatch("tensor product exceeds the qubit cap");
  }
  const Vector& va = a.amplitudes();
  const Vector& vb = b.amplitudes();
  Vector out(va.size() * vb.size());
  for (Eigen::Index i = 0; i < va.size(); ++i) out.segment(i * vb.size(), vb.size()) = va(i) * vb;
  return PureState(std::move(out));
}

DensityOperator partial_trace(const DensityOperator& rho, std::span<const int> keep) {
  const int n = rho.qubits();
  if (keep.empty()) throw std::invalid_argument("partial_trace: keep set is empty");
  std::vector<int> kept(keep.begin(), keep.end());
  std::sort(kept.begin(), kept.end());
  if (std::adjacent_find(kept.begin(), kept.end()) != kept.end()) {
    throw std::invalid_argument("partial_trace: duplicate qubit index");
  }
  if (kept.front() < 0 || kept.back() >= n) {
    throw std::out_of_range("partial_trace: qubit index out of range");
  }
  std::vector<int> traced;
  for (int q = 0; q < n; ++q) {
    if (!std::binary_search(kept.begin(), kept.end(), q)) traced.push_back(q);
  }

  const std::size_t dk = std::size_t{1} << kept.size();
  const std::size_t dt = std::size_t{1} << traced.size();
  // compose(a, t): full index whose kept bits spell a and traced bits spell t,
  // both read most-significant qubit first.
  auto scatter = [n](std::size_t value, const std::vector<int>& qubits) {
    std::size_t x = 0;
    const std::size_t w = qubits.size();
    for (std::size_t i = 0; i < w; ++i) {
      if ((value >> (w - 1 - i)) & 1U) x |= std::size_t{1} << (n - 1 - qubits[i]);
    }
    return x;
  };
  std::vector<std::size_t> kept_part(dk), traced_part(dt);
  for (std::size_t a = 0; a < dk; ++a) kept_part[a] = scatter(a, kept);
  for (std::size_t t = 0; t < dt; ++t) traced_part[t] = scatter(t, traced);

  const Matrix& m = rho.matrix();
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dk));
  for (std::size_t a = 0; a < dk; ++a) {
    for (std::size_t b = 0; b < dk; ++b) {
      Complex acc = 0.0;
      for (std::size_t t = 0; t < dt; ++t) {
        acc += m(static_cast<Eigen::Index>(kept_part[a] | traced_part[t]),
                 static_cast<Eigen::Index>(kept_part[b] | traced_part[t]));
      }
      out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = acc;
    }
  }
  return DensityOperator::trusted(std::move(out));
}

Matrix psd_sqrt(const Matrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (hermitian + hermitian.adjoint()));
  Eigen::VectorXd values = solver.eigenvalues();
  for (double& v : values) v = v > 0.0 ? std::sqrt(v) : 0.0;
  return solver.eigenvectors() * values.asDiagonal() * solver.eigenvectors().adjoint();
}

double fidelity(const DensityOperator& rho, const DensityOperator& sigma) {
  require_same_dim(rho.dim(), sigma.dim(), "fidelity");
  const Matrix root = psd_sqrt(rho.matrix());
  const Matrix inner = root * sigma.matrix() * root;
  Eigen::VectorXd eig = hermitian_eigenvalues(0.5 * (inner + inner.adjoint()));
  double tr = 0.0;
  for (double e : eig) tr += e > kEigenClip ? std::sqrt(e) : 0.0;
  return std::clamp(tr * tr, 0.0, 1.0);
}

double fidelity(const PureState& psi, const DensityOperator& sigma) {
  require_same_dim(psi.dim(), sigma.dim(), "fidelity");
  const Vector& v = psi.amplitudes();
  return std::clamp(v.dot(sigma.matrix() * v).real(), 0.0, 1.0);
}

double fidelity(const PureState& psi, const PureState& phi) {
  require_same_dim(psi.dim(), phi.dim(), "fidelity");
  return std::clamp(std::norm(psi.amplitudes().dot(phi.amplitudes())), 0.0, 1.0);
}

double trace_norm_hermitian(const Matrix& hermitian) {
  return hermitian_eigenvalues(0.5 * (hermitian + hermitian.adjoint())).cwiseAbs().sum();
}

double trace_distance(const DensityOperator& rho, const DensityOperator& sigma) {
  require_same_dim(rho.dim(), sigma.dim(), "trace_distance");
  return std::clamp(0.5 * trace_norm_hermitian(rho.matrix() - sigma.matrix()), 0.0, 1.0);
}

MeasurementOutcome gentle_measurement(const DensityOperator& rho, const Projector& pi) {
  require_same_dim(rho.dim(), pi.dim(), "gentle_measurement");
  const Matrix projected = pi.matrix() * rho.matrix() * pi.matrix();
  const double prob = projected.trace().real();
  if (prob <= kEigenClip) {
    throw InvalidState("gentle_measurement: outcome has probability zero");
  }
  return {std::min(prob, 1.0), DensityOperator::trusted(projected / prob)};
}

}  // namespace qfelab
