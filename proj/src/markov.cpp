#include "hmp/markov.hpp"

#include <Eigen/LU>
#include <cmath>
#include <string>

#include "hmp/errors.hpp"

namespace hmp {

namespace {

using BoolMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

BoolMatrix boolean_product(const BoolMatrix& a, const BoolMatrix& b) {
  const Eigen::Index n = a.rows();
  BoolMatrix out = BoolMatrix::Constant(n, n, false);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k < n; ++k) {
      if (!a(i, k)) continue;
      for (Eigen::Index j = 0; j < n; ++j) out(i, j) = out(i, j) || b(k, j);
    }
  }
  return out;
}

void require_square(const Matrix& m) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw InvalidArgument("transition matrix must be square and non-empty, got " + std::to_string(m.rows()) + "x" +
                          std::to_string(m.cols()));
  }
}

}  // namespace

PrimitivityResult is_primitive(const Matrix& transition) {
  require_square(transition);
  const Eigen::Index n = transition.rows();
  const BoolMatrix pattern = (transition.array() > 0.0).matrix();
  const long wielandt = (n - 1) * (n - 1) + 1;

  BoolMatrix power = pattern;
  for (long k = 1; k <= wielandt; ++k) {
    if (power.all()) return {true, static_cast<int>(k)};
    power = boolean_product(power, pattern);
  }
  return {false, std::nullopt};
}

SimplexVector stationary_distribution(const Matrix& transition) {
  require_square(transition);
  const Eigen::Index n = transition.rows();

  // Rows of the system are the balance equations (P^T - I) x = 0; the last
  // one is redundant and carries sum(x) = 1 instead.
  Eigen::MatrixXd system = transition.transpose();
  system.diagonal().array() -= 1.0;
  system.row(n - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(n - 1) = 1.0;

  const Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
  if (!lu.isInvertible()) {
    throw SingularSystemError("stationary distribution is not unique: balance equations have rank " +
                              std::to_string(lu.rank()) + " < " + std::to_string(n));
  }
  Eigen::VectorXd x = lu.solve(rhs);
  x += lu.solve(rhs - system * x);  // one step of iterative refinement

  std::vector<double> entries(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    if (x(i) < -1e-9) throw SingularSystemError("stationary solve produced a negative probability");
    entries[static_cast<std::size_t>(i)] = std::max(x(i), 0.0);
  }
  return SimplexVector::from_weights(std::move(entries));
}

double markov_entropy_rate(const Matrix& transition, LogBase base) {
  const SimplexVector x = stationary_distribution(transition);
  const std::size_t n = x.dimension();
  double rate = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    rate += x[i] * entropy(std::span<const double>(transition.data() + i * n, n), base);
  }
  return rate;
}

ChainAnalysis analyze_chain(const Matrix& transition, LogBase base) {
  ChainAnalysis out;
  const PrimitivityResult prim = is_primitive(transition);
  out.is_primitive = prim.primitive;
  out.primitivity_witness = prim.witness;
  out.stationary = stationary_distribution(transition);
  out.markov_entropy_rate = markov_entropy_rate(transition, base);
  return out;
}

ValidationReport validate_with_chain(const HmmModel& model) {
  ValidationReport report = validate_model(model);
  report.is_primitive_P = is_primitive(model.transition()).primitive;
  if (!*report.is_primitive_P) {
    report.warnings.push_back(
        "transition matrix P is not primitive; entropy limits may depend on the initial belief");
  }
  return report;
}

}  // namespace hmp
