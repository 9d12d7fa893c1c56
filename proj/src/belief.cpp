#include "hmp/belief.hpp"

#include <string>

#include "hmp/errors.hpp"

namespace hmp {

namespace {

void check_belief(const HmmModel& model, const SimplexVector& belief) {
  if (belief.dimension() != model.num_states()) {
    throw InvalidArgument("belief has dimension " + std::to_string(belief.dimension()) + ", model has " +
                          std::to_string(model.num_states()) + " states");
  }
}

void check_symbol(const HmmModel& model, Symbol z) {
  if (z >= model.num_obs()) {
    throw InvalidArgument("observation symbol " + std::to_string(z) + " out of range (|Z| = " +
                          std::to_string(model.num_obs()) + ")");
  }
}

[[noreturn]] void zero_probability(Symbol z, std::span<const double> belief) {
  std::string where = "(";
  for (std::size_t i = 0; i < belief.size(); ++i) where += (i ? ", " : "") + std::to_string(belief[i]);
  where += ")";
  throw ZeroProbabilityError("observation " + std::to_string(z) + " has zero probability under belief " + where);
}

}  // namespace

double eta_into(const HmmModel& model, Symbol z, std::span<const double> belief, std::span<double> out,
                bool renormalize) {
  const std::size_t ns = model.num_states();
  const std::size_t nz = model.num_obs();
  const double* p = model.transition().data();
  const double* t = model.emission().data();

  double denom = 0.0;
  for (std::size_t k = 0; k < ns; ++k) denom += belief[k] * t[k * nz + z];
  if (!(denom > 0.0)) return 0.0;

  for (std::size_t j = 0; j < ns; ++j) out[j] = 0.0;
  for (std::size_t k = 0; k < ns; ++k) {
    const double w = belief[k] * t[k * nz + z];
    if (w == 0.0) continue;
    for (std::size_t j = 0; j < ns; ++j) out[j] += w * p[k * ns + j];
  }
  if (renormalize) {
    normalize_in_place(out);
  } else {
    for (std::size_t j = 0; j < ns; ++j) out[j] /= denom;
  }
  return denom;
}

SimplexVector eta(const HmmModel& model, Symbol z, const SimplexVector& belief, const BeliefUpdateConfig& config) {
  check_belief(model, belief);
  check_symbol(model, z);
  std::vector<double> out(model.num_states());
  if (eta_into(model, z, belief.entries(), out, config.renormalize) == 0.0) zero_probability(z, belief.entries());
  return SimplexVector::from_weights(std::move(out));
}

SimplexVector alpha_step(const HmmModel& model, Symbol z, const SimplexVector& alpha,
                         const BeliefUpdateConfig& config) {
  check_belief(model, alpha);
  check_symbol(model, z);
  const std::size_t ns = model.num_states();
  const std::size_t nz = model.num_obs();
  const double* p = model.transition().data();
  const double* t = model.emission().data();

  std::vector<double> predicted(ns, 0.0);
  for (std::size_t k = 0; k < ns; ++k) {
    for (std::size_t j = 0; j < ns; ++j) predicted[j] += alpha[k] * p[k * ns + j];
  }
  std::vector<double> out(ns);
  double r = 0.0;
  for (std::size_t j = 0; j < ns; ++j) {
    out[j] = predicted[j] * t[j * nz + z];
    r += out[j];
  }
  if (!(r > 0.0)) zero_probability(z, alpha.entries());
  if (!config.renormalize) {
    for (double& v : out) v /= r;
  }
  return SimplexVector::from_weights(std::move(out));
}

double sequence_probability(const HmmModel& model, const SimplexVector& belief, std::span<const Symbol> word,
                            const BeliefUpdateConfig& config) {
  check_belief(model, belief);
  for (Symbol z : word) check_symbol(model, z);
  const std::size_t ns = model.num_states();
  std::vector<double> current = belief.to_vector();
  std::vector<double> next(ns);
  std::vector<double> predictive(model.num_obs());
  double prob = 1.0;
  for (std::size_t i = 0; i < word.size(); ++i) {
    const Symbol z = word[i];
    zeta_into(model, current, predictive);
    const double q = predictive[z];
    if (!(q > 0.0)) {
      if (config.zero_prob_policy == ZeroProbPolicy::Skip) return 0.0;
      zero_probability(z, current);
    }
    prob *= q;
    if (i + 1 == word.size()) break;
    eta_into(model, z, current, next, config.renormalize);
    current.swap(next);
  }
  return prob;
}

SimplexVector belief_after_word(const HmmModel& model, const SimplexVector& belief, std::span<const Symbol> word,
                                const BeliefUpdateConfig& config) {
  SimplexVector current = belief;
  for (Symbol z : word) current = eta(model, z, current, config);
  return current;
}

}  // namespace hmp
