#include "qfelab/channels.hpp"
#include "qfelab/prs.hpp"

namespace qfelab {

namespace {

// Eigenvalues of the family Gram operator below this are treated as outside its support.
constexpr double kSupportCut = 1e-10;

CompressorPair projection_compressor(int n, int m) {
  const auto d = static_cast<Eigen::Index>(dimension_of(n));
  const auto k = static_cast<Eigen::Index>(dimension_of(m));
  std::vector<Matrix> comp;
  Matrix keep = Matrix::Zero(k, d);
  keep.leftCols(k).setIdentity();
  comp.push_back(std::move(keep));
  // Failure branch: the complement basis |x>, x >= k, is re-prepared as |0>.
  for (Eigen::Index x = k; x < d; ++x) {
    Matrix op = Matrix::Zero(k, d);
    op(0, x) = 1.0;
    comp.push_back(std::move(op));
  }
  Matrix embed = Matrix::Zero(d, k);
  embed.topRows(k).setIdentity();
  return {KrausChannel(std::move(comp), n, m), KrausChannel({embed}, m, n)};
}

CompressorPair trace_out_compressor(int n, int m) {
  const auto k = static_cast<Eigen::Index>(dimension_of(m));
  const Eigen::Index e = Eigen::Index{1} << (n - m);
  const Eigen::Index d = k * e;
  // A_j = I_k (x) <j| on the last n-m qubits; Decomp = I_k (x) |0...0>.
  std::vector<Matrix> comp;
  for (Eigen::Index j = 0; j < e; ++j) {
    Matrix op = Matrix::Zero(k, d);
    for (Eigen::Index a = 0; a < k; ++a) op(a, a * e + j) = 1.0;
    comp.push_back(std::move(op));
  }
  Matrix attach = Matrix::Zero(d, k);
  for (Eigen::Index a = 0; a < k; ++a) attach(a * e, a) = 1.0;
  return {KrausChannel(std::move(comp), n, m), KrausChannel({attach}, m, n)};
}

// Discriminate with the pretty good measurement of the family, write the key
// label into the m-qubit register, and re-prepare the labelled state.
CompressorPair keyed_compressor(int n, int m, const PrsFamily& family) {
  if (family.n() != n) throw DimensionMismatch("keyed compressor: family acts on a different n");
  if (family.lambda() > m) {
    throw std::invalid_argument("keyed compressor: 2^lambda keys do not fit in 2^m labels");
  }
  const auto d = static_cast<Eigen::Index>(dimension_of(n));
  const auto k = static_cast<Eigen::Index>(dimension_of(m));
  const auto keys = static_cast<Eigen::Index>(family.key_count());

  std::vector<Vector> states;
  Matrix gram = Matrix::Zero(d, d);
  for (Eigen::Index key = 0; key < keys; ++key) {
    states.push_back(family.generate(static_cast<std::uint64_t>(key)).amplitudes());
    gram.noalias() += states.back() * states.back().adjoint();
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(gram);
  const Matrix& vecs = solver.eigenvectors();
  Eigen::VectorXd inv_sqrt = solver.eigenvalues();
  std::vector<Eigen::Index> complement;
  for (Eigen::Index i = 0; i < d; ++i) {
    if (inv_sqrt(i) > kSupportCut) {
      inv_sqrt(i) = 1.0 / std::sqrt(inv_sqrt(i));
    } else {
      inv_sqrt(i) = 0.0;
      complement.push_back(i);
    }
  }
  const Matrix gram_inv_sqrt = vecs * inv_sqrt.asDiagonal() * vecs.adjoint();

  std::vector<Matrix> comp;
  for (Eigen::Index key = 0; key < keys; ++key) {
    const Vector mu = gram_inv_sqrt * states[static_cast<std::size_t>(key)];
    Matrix op = Matrix::Zero(k, d);
    op.row(key) = mu.adjoint();
    comp.push_back(std::move(op));
  }
  for (Eigen::Index i : complement) {
    Matrix op = Matrix::Zero(k, d);
    op.row(0) = vecs.col(i).adjoint();
    comp.push_back(std::move(op));
  }

  std::vector<Matrix> decomp;
  for (Eigen::Index l = 0; l < k; ++l) {
    const Vector& target = states[static_cast<std::size_t>(l < keys ? l : 0)];
    Matrix op = Matrix::Zero(d, k);
    op.col(l) = target;
    decomp.push_back(std::move(op));
  }
  return {KrausChannel(std::move(comp), n, m), KrausChannel(std::move(decomp), m, n)};
}

}  // namespace

double CompressorPair::self_fidelity(const PureState& psi) const {
  if (psi.dim() != comp.d_in() || decomp.d_out() != comp.d_in()) {
    throw DimensionMismatch("compressor self_fidelity: dimension mismatch");
  }
  const Vector& v = psi.amplitudes();
  const auto k = static_cast<Eigen::Index>(comp.d_out());
  Matrix compressed = Matrix::Zero(k, k);
  for (const Matrix& a : comp.kraus_ops()) {
    const Vector w = a * v;
    compressed.noalias() += w * w.adjoint();
  }
  double f = 0.0;
  for (const Matrix& b : decomp.kraus_ops()) {
    const Vector w = b.adjoint() * v;
    f += w.dot(compressed * w).real();
  }
  return f;
}

double CompressorPair::average_fidelity() const {
  if (decomp.d_out() != comp.d_in() || decomp.d_in() != comp.d_out()) {
    throw DimensionMismatch("compressor average_fidelity: channels do not compose to a square map");
  }
  const double d = static_cast<double>(comp.d_in());
  double acc = 0.0;
  for (const Matrix& a : comp.kraus_ops()) {
    for (const Matrix& b : decomp.kraus_ops()) {
      // Tr(B A) = sum_{x,y} B(x,y) A(y,x)
      acc += std::norm(b.cwiseProduct(a.transpose()).sum());
    }
  }
  return (acc / d + 1.0) / (d + 1.0);
}

CompressorKind parse_compressor_kind(const std::string& name) {
  if (name == "projection") return CompressorKind::projection;
  if (name == "trace_out" || name == "trace-out") return CompressorKind::trace_out;
  if (name == "keyed") return CompressorKind::keyed;
  throw std::invalid_argument("unknown compressor kind '" + name + "'");
}

const char* to_string(CompressorKind kind) {
  switch (kind) {
    case CompressorKind::projection:
      return "projection";
    case CompressorKind::trace_out:
      return "trace_out";
    case CompressorKind::keyed:
      return "keyed";
  }
  return "unknown";
}

CompressorPair make_compressor(CompressorKind kind, int n, int m, const PrsFamily* family) {
  if (m < 1 || m >= n || n > kMaxQubits) {
    throw std::invalid_argument("make_compressor: need 1 <= m < n <= 12");
  }
  switch (kind) {
    case CompressorKind::projection:
      return projection_compressor(n, m);
    case CompressorKind::trace_out:
      return trace_out_compressor(n, m);
    case CompressorKind::keyed:
      if (family == nullptr) throw std::invalid_argument("keyed compressor needs a PRS family");
      return keyed_compressor(n, m, *family);
  }
  throw std::invalid_argument("make_compressor: invalid kind");
}

}  // namespace qfelab
