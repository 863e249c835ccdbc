#pragma once

#include <vector>

#include "qfelab/core.hpp"
#include "qfelab/haar.hpp"

namespace qfelab {

class PrsFamily;

// CPTP map rho -> sum_i K_i rho K_i^dagger, each K_i of shape (2^n_out x 2^n_in).
class KrausChannel {
 public:
  // Throws DimensionMismatch on shape errors and InvalidState if sum K^dagger K != I.
  KrausChannel(std::vector<Matrix> kraus_ops, int n_in, int n_out);

  static KrausChannel identity(int n);
  static KrausChannel unitary(const Matrix& u);
  // rho -> I/d, Kraus |i><j| / sqrt(d).
  static KrausChannel completely_depolarizing(int n);
  // Computational-basis measurement, Kraus |i><i|.
  static KrausChannel dephasing(int n);
  // Measure-and-reprepare |0>, Kraus |0><i|.
  static KrausChannel reset(int n);
  // Trace out the last `traced` qubits and re-attach them in |0...0>.
  static KrausChannel trace_and_reattach(int n, int traced);
  // Random channel from a Haar isometry with `count` Kraus operators.
  static KrausChannel random(int n_in, int n_out, int count, SeededSampler& sampler);

  const std::vector<Matrix>& kraus_ops() const { return ops_; }
  int n_in() const { return n_in_; }
  int n_out() const { return n_out_; }
  std::size_t d_in() const { return dimension_of(n_in_); }
  std::size_t d_out() const { return dimension_of(n_out_); }
  bool is_square() const { return n_in_ == n_out_; }

  DensityOperator apply(const DensityOperator& rho) const;
  // <psi|Phi(|psi><psi|)|psi> = sum_i |<psi|K_i|psi>|^2.
  double self_fidelity(const PureState& psi) const;

 private:
  std::vector<Matrix> ops_;
  int n_in_;
  int n_out_;
};

// Kraus set {B_j A_i}: apply `first`, then `second`.
KrausChannel compose(const KrausChannel& second, const KrausChannel& first);

// (1/d^2) sum_alpha |Tr C_alpha|^2.
double entanglement_fidelity(const KrausChannel& channel);
// <phi+|(I (x) Phi)(|phi+><phi+|)|phi+> from the explicit Choi state (n_in <= 6).
double entanglement_fidelity_choi(const KrausChannel& channel);
// (d F_E + 1)/(d + 1).
double average_fidelity_exact(const KrausChannel& channel);

struct MonteCarloEstimate {
  double mean;
  double std_error;
};
MonteCarloEstimate average_fidelity_mc(const KrausChannel& channel, std::size_t samples,
                                       const SeededSampler& sampler);

struct FidelityBound {
  int n;
  int m;
  double fe_bound;
  double favg_bound;
};
FidelityBound incompressibility_bound(int n, int m);

enum class CompressorKind { projection, trace_out, keyed };

struct CompressorPair {
  KrausChannel comp;
  KrausChannel decomp;

  KrausChannel composed() const { return compose(decomp, comp); }
  // <psi|Decomp(Comp(psi))|psi> without materialising the composed Kraus set.
  double self_fidelity(const PureState& psi) const;
  // F_avg of Decomp o Comp from sum_ij |Tr(B_j A_i)|^2, equal to
  // average_fidelity_exact(composed()) but without storing the product set.
  double average_fidelity() const;
};

CompressorKind parse_compressor_kind(const std::string& name);
const char* to_string(CompressorKind kind);

// Built-in compressors n -> m qubits. `family` is required for the keyed kind.
CompressorPair make_compressor(CompressorKind kind, int n, int m,
                               const PrsFamily* family = nullptr);

}  // namespace qfelab
