#include "qfelab/chanopt.hpp"

#include <cmath>
#include <sstream>

#include "qfelab/parallel.hpp"

namespace qfelab {

namespace {

constexpr double kBoundSlack = 1e-6;
constexpr int kMaxHalvings = 20;
constexpr std::size_t kConvergenceWindow = 25;
constexpr double kConvergenceGain = 1e-8;
constexpr double kInitialStep = 1.0;
constexpr double kMaxStep = 1e4;

std::vector<Matrix> split_rows(const Matrix& v, Eigen::Index out_dim, Eigen::Index env) {
  std::vector<Matrix> ops(static_cast<std::size_t>(env), Matrix(out_dim, v.cols()));
  for (Eigen::Index a = 0; a < out_dim; ++a) {
    for (Eigen::Index j = 0; j < env; ++j) ops[static_cast<std::size_t>(j)].row(a) = v.row(a * env + j);
  }
  return ops;
}

Matrix join_rows(const std::vector<Matrix>& ops, Eigen::Index env) {
  const Eigen::Index out_dim = ops.front().rows();
  Matrix v(out_dim * env, ops.front().cols());
  for (Eigen::Index a = 0; a < out_dim; ++a) {
    for (Eigen::Index j = 0; j < env; ++j) v.row(a * env + j) = ops[static_cast<std::size_t>(j)].row(a);
  }
  return v;
}

// T_{jl} = Tr(B_l A_j)
Matrix trace_table(const std::vector<Matrix>& a, const std::vector<Matrix>& b) {
  Matrix t(static_cast<Eigen::Index>(a.size()), static_cast<Eigen::Index>(b.size()));
  for (std::size_t j = 0; j < a.size(); ++j) {
    for (std::size_t l = 0; l < b.size(); ++l) {
      t(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l)) =
          b[l].cwiseProduct(a[j].transpose()).sum();
    }
  }
  return t;
}

void check_bound(double value, const FidelityBound& bound) {
  if (value > bound.favg_bound + kBoundSlack) {
    throw InvariantViolation("optimizer objective " + std::to_string(value) +
                             " exceeds the incompressibility bound " +
                             std::to_string(bound.favg_bound));
  }
}

}  // namespace

std::vector<Matrix> IsometryParams::comp_kraus() const {
  return split_rows(comp, static_cast<Eigen::Index>(dimension_of(m)), Eigen::Index{1} << e1);
}

std::vector<Matrix> IsometryParams::decomp_kraus() const {
  return split_rows(decomp, static_cast<Eigen::Index>(dimension_of(n)), Eigen::Index{1} << e2);
}

CompressorPair IsometryParams::to_pair() const {
  return {KrausChannel(comp_kraus(), n, m), KrausChannel(decomp_kraus(), m, n)};
}

double IsometryParams::isometry_error() const {
  const Matrix c = comp.adjoint() * comp - Matrix::Identity(comp.cols(), comp.cols());
  const Matrix d = decomp.adjoint() * decomp - Matrix::Identity(decomp.cols(), decomp.cols());
  return std::max(c.cwiseAbs().maxCoeff(), d.cwiseAbs().maxCoeff());
}

Matrix polar_retract(const Matrix& v) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(v.adjoint() * v);
  Eigen::VectorXd values = solver.eigenvalues();
  for (double& x : values) {
    if (x <= 0.0) throw InvalidState("polar_retract: matrix is rank deficient");
    x = 1.0 / std::sqrt(x);
  }
  return v * (solver.eigenvectors() * values.asDiagonal() * solver.eigenvectors().adjoint());
}

double chanopt_objective(const IsometryParams& params) {
  const Matrix t = trace_table(params.comp_kraus(), params.decomp_kraus());
  const double d = static_cast<double>(dimension_of(params.n));
  return (t.squaredNorm() / d + 1.0) / (d + 1.0);
}

std::pair<Matrix, Matrix> chanopt_gradient(const IsometryParams& params) {
  const std::vector<Matrix> a = params.comp_kraus();
  const std::vector<Matrix> b = params.decomp_kraus();
  const Matrix t = trace_table(a, b);
  const double d = static_cast<double>(dimension_of(params.n));
  const double scale = 2.0 / (d * (d + 1.0));

  std::vector<Matrix> ga(a.size(), Matrix::Zero(a.front().rows(), a.front().cols()));
  std::vector<Matrix> gb(b.size(), Matrix::Zero(b.front().rows(), b.front().cols()));
  for (std::size_t j = 0; j < a.size(); ++j) {
    for (std::size_t l = 0; l < b.size(); ++l) {
      const Complex tjl = t(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l));
      ga[j] += scale * tjl * b[l].adjoint();
      gb[l] += scale * tjl * a[j].adjoint();
    }
  }
  return {join_rows(ga, Eigen::Index{1} << params.e1), join_rows(gb, Eigen::Index{1} << params.e2)};
}

IsometryParams random_isometry_params(int n, int m, SeededSampler& sampler) {
  IsometryParams p;
  p.n = n;
  p.m = m;
  p.e1 = n;
  p.e2 = m;
  const std::size_t d = dimension_of(n);
  const std::size_t k = dimension_of(m);
  p.comp = sample_haar_unitary_dim(k * (std::size_t{1} << p.e1), sampler)
               .leftCols(static_cast<Eigen::Index>(d));
  p.decomp = sample_haar_unitary_dim(d * (std::size_t{1} << p.e2), sampler)
                 .leftCols(static_cast<Eigen::Index>(k));
  return p;
}

const std::vector<double>& OptimizationTrace::objective_history() const {
  static const std::vector<double> empty;
  for (const RestartTrace& r : restarts) {
    if (r.restart == best_restart) return r.objective_history;
  }
  return empty;
}

std::string OptimizationTrace::to_csv() const {
  std::ostringstream out;
  out.precision(12);
  out << "# schema=1\n"
      << "restart,iteration,objective,n,m,favg_bound\n";
  for (const RestartTrace& r : restarts) {
    for (std::size_t i = 0; i < r.objective_history.size(); ++i) {
      out << r.restart << ',' << i << ',' << r.objective_history[i] << ',' << bound.n << ','
          << bound.m << ',' << bound.favg_bound << '\n';
    }
  }
  return out.str();
}

OptimizationResult optimize_compression(int n, int m, std::size_t iters, std::size_t restarts,
                                        const SeededSampler& sampler) {
  if (m < 1 || m > n || n > 6) throw std::invalid_argument("optimize_compression: need 1 <= m <= n <= 6");
  if (restarts < 1) throw std::invalid_argument("optimize_compression: need at least one restart");
  const FidelityBound bound = incompressibility_bound(n, m);

  std::vector<IsometryParams> finals(restarts);
  std::vector<RestartTrace> traces(restarts);
  std::vector<std::size_t> steps(restarts, 0);
  parallel_for(restarts, [&](std::size_t r) {
    SeededSampler local = sampler.child(r);
    IsometryParams p = random_isometry_params(n, m, local);
    double value = chanopt_objective(p);
    check_bound(value, bound);
    std::vector<double> history{value};
    double step = kInitialStep;
    for (std::size_t it = 0; it < iters; ++it) {
      const auto [gc, gd] = chanopt_gradient(p);
      bool accepted = false;
      for (int h = 0; h <= kMaxHalvings; ++h) {
        IsometryParams candidate = p;
        candidate.comp = polar_retract(p.comp + step * gc);
        candidate.decomp = polar_retract(p.decomp + step * gd);
        const double cand_value = chanopt_objective(candidate);
        check_bound(cand_value, bound);
        if (cand_value > value) {
          p = std::move(candidate);
          value = cand_value;
          accepted = true;
          step = std::min(step * 2.0, kMaxStep);
          break;
        }
        step *= 0.5;
      }
      if (!accepted) break;
      history.push_back(value);
      ++steps[r];
      if (history.size() > kConvergenceWindow &&
          history.back() - history[history.size() - 1 - kConvergenceWindow] < kConvergenceGain) {
        break;
      }
    }
    finals[r] = std::move(p);
    traces[r] = {r, std::move(history)};
  });

  std::size_t best = 0;
  for (std::size_t r = 1; r < restarts; ++r) {
    if (traces[r].objective_history.back() > traces[best].objective_history.back()) best = r;
  }
  OptimizationTrace trace;
  trace.bound = bound;
  trace.best_restart = best;
  trace.best_favg = traces[best].objective_history.back();
  for (std::size_t s : steps) trace.iterations += s;
  trace.restarts = std::move(traces);
  CompressorPair pair = finals[best].to_pair();
  return {std::move(pair), std::move(finals[best]), std::move(trace)};
}

}  // namespace qfelab
