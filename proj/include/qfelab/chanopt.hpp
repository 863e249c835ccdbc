#pragma once

#include <string>
#include <vector>

#include "qfelab/channels.hpp"
#include "qfelab/haar.hpp"

namespace qfelab {

// Stinespring isometries for Comp: n -> m and Decomp: m -> n. The environment
// index is the least significant part of the output row index, so the Kraus
// operators are A_j = rows {a * 2^e1 + j} of comp and B_l = rows {b * 2^e2 + l} of decomp.
struct IsometryParams {
  int n = 0;
  int m = 0;
  int e1 = 0;
  int e2 = 0;
  Matrix comp;    // (2^m 2^e1) x 2^n
  Matrix decomp;  // (2^n 2^e2) x 2^m

  std::vector<Matrix> comp_kraus() const;
  std::vector<Matrix> decomp_kraus() const;
  CompressorPair to_pair() const;
  // max |V^dagger V - I| over both isometries.
  double isometry_error() const;
};

// V (V^dagger V)^{-1/2}.
Matrix polar_retract(const Matrix& v);

// Average fidelity of the composed channel from the isometry entries.
double chanopt_objective(const IsometryParams& params);

// Euclidean gradient of chanopt_objective: for real directions dV the first-order change
// is Re Tr(G^dagger dV). Returned as a pair (G_comp, G_decomp).
std::pair<Matrix, Matrix> chanopt_gradient(const IsometryParams& params);

IsometryParams random_isometry_params(int n, int m, SeededSampler& sampler);

struct RestartTrace {
  std::size_t restart = 0;
  std::vector<double> objective_history;
};

struct OptimizationTrace {
  std::size_t iterations = 0;
  std::vector<RestartTrace> restarts;
  double best_favg = 0.0;
  std::size_t best_restart = 0;
  FidelityBound bound{};

  // Flattened best-restart history.
  const std::vector<double>& objective_history() const;
  std::string to_csv() const;
};

struct OptimizationResult {
  CompressorPair pair;
  IsometryParams params;
  OptimizationTrace trace;
};

// Projected gradient ascent on the isometry manifold. Allows m == n for testing.
// Throws InvariantViolation if any evaluated objective exceeds favg_bound + 1e-6.
OptimizationResult optimize_compression(int n, int m, std::size_t iters, std::size_t restarts,
                                        const SeededSampler& sampler);

}  // namespace qfelab
