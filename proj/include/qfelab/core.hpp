#pragma once

// Dense states and the distance toolkit.
//
// Conventions used throughout the library:
//  * kets are column vectors, matrices are stored densely;
//  * qubit 0 is the most significant tensor factor, so basis index
//    x = b_0 b_1 ... b_{n-1} in binary;
//  * fidelity is the SQUARED form F(rho, sigma) = (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2,
//    which reduces to <psi|sigma|psi> when rho = |psi><psi|.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qfelab/errors.hpp"

namespace qfelab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr int kMaxQubits = 12;
inline constexpr double kTolerance = 1e-9;
// Eigenvalues below this magnitude are treated as zero before PSD checks.
inline constexpr double kEigenClip = 1e-12;

// 2^n, validating 0 <= n <= kMaxQubits.
std::size_t dimension_of(int qubits);
// Inverse of dimension_of; throws unless dim is a power of two within the cap.
int qubits_of(std::size_t dim);

class DensityOperator;

class PureState {
 public:
  // Throws InvalidState unless the amplitude vector is unit-norm with power-of-two length.
  explicit PureState(Vector amplitudes);

  static PureState basis(int qubits, std::uint64_t index);
  // Normalizes before validating; throws on the zero vector.
  static PureState normalized(Vector amplitudes);

  const Vector& amplitudes() const { return amplitudes_; }
  int qubits() const { return qubits_; }
  std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }

  DensityOperator density() const;

 private:
  Vector amplitudes_;
  int qubits_;
};

class DensityOperator {
 public:
  // Throws InvalidState unless Hermitian, PSD and unit trace (tolerance kTolerance).
  explicit DensityOperator(Matrix matrix);

  // Skips the eigen-decomposition; for results of trace- and positivity-preserving
  // maps on operands that were already validated.
  static DensityOperator trusted(Matrix matrix);
  static DensityOperator maximally_mixed(int qubits);

  const Matrix& matrix() const { return matrix_; }
  int qubits() const { return qubits_; }
  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }

  double trace() const { return matrix_.trace().real(); }
  // Tr(rho^2).
  double purity() const;

 private:
  struct Unchecked {};
  DensityOperator(Matrix matrix, Unchecked);

  Matrix matrix_;
  int qubits_;
};

class Projector {
 public:
  // Throws InvalidState unless Hermitian and idempotent.
  explicit Projector(Matrix matrix);

  static Projector identity(int qubits);
  static Projector onto(const PureState& state);

  const Matrix& matrix() const { return matrix_; }
  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }

 private:
  Matrix matrix_;
};

DensityOperator tensor_product(const DensityOperator& a, const DensityOperator& b);
PureState tensor_product(const PureState& a, const PureState& b);

// Reduced state on the qubits listed in `keep` (returned in ascending qubit order).
DensityOperator partial_trace(const DensityOperator& rho, std::span<const int> keep);

double fidelity(const DensityOperator& rho, const DensityOperator& sigma);
// <psi|sigma|psi>; agrees with the general form for a pure first argument.
double fidelity(const PureState& psi, const DensityOperator& sigma);
double fidelity(const PureState& psi, const PureState& phi);

double trace_distance(const DensityOperator& rho, const DensityOperator& sigma);
// ||A||_1 for a Hermitian matrix (sum of absolute eigenvalues).
double trace_norm_hermitian(const Matrix& hermitian);

struct MeasurementOutcome {
  double probability;
  DensityOperator post;
};

// Post-selects rho on the projector outcome. The returned state always satisfies
// T(post, rho) <= 2 sqrt(1 - probability). Throws InvalidState when probability is 0.
MeasurementOutcome gentle_measurement(const DensityOperator& rho, const Projector& pi);

// PSD square root with negative eigenvalues clamped to zero.
Matrix psd_sqrt(const Matrix& hermitian);

}  // namespace qfelab
