#include "hmp/oracle.hpp"

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "hmp/errors.hpp"
#include "hmp/markov.hpp"

namespace hmp {

namespace {

void check_budget(const HmmModel& model, int length) {
  const double terms = std::pow(static_cast<double>(model.num_obs()), length) * static_cast<double>(model.num_states());
  if (terms > kEnumerationBudget) {
    throw CapacityExceeded("enumerating " + std::to_string(model.num_obs()) + "^" + std::to_string(length) +
                           " words exceeds the budget of 1e8 terms");
  }
}

// Calls fn(word) for every word of the given length in lexicographic order.
template <typename Fn>
void for_each_word(std::size_t alphabet, int length, Fn&& fn) {
  Word word(static_cast<std::size_t>(length), 0);
  while (true) {
    fn(std::span<const Symbol>(word));
    int pos = length - 1;
    while (pos >= 0 && ++word[static_cast<std::size_t>(pos)] == alphabet) {
      word[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) return;
  }
}

struct ConditionalPair {
  double next_symbol = 0.0;  // H(Z_k | Z_0^{k-1}, pi_0 = start)
  double state = 0.0;        // H(S_k | Z_0^{k-1}, pi_0 = start)
};

ConditionalPair conditional_entropies(const HmmModel& model, const SimplexVector& start, int length,
                                      const OracleConfig& config) {
  check_budget(model, length);
  const BeliefUpdateConfig update{true, config.zero_prob_policy};
  ConditionalPair out;
  for_each_word(model.num_obs(), length, [&](std::span<const Symbol> word) {
    const double p = sequence_probability(model, start, word, update);
    if (p == 0.0) return;
    const SimplexVector belief = belief_after_word(model, start, word, update);
    out.next_symbol += p * entropy(zeta(model, belief), config.base);
    out.state += p * entropy(belief, config.base);
  });
  return out;
}

void check_depth(int n) {
  if (n < 1) throw InvalidArgument("oracle depth must be at least 1");
}

std::size_t sample_index(std::span<const double> probs, double u) {
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] > 0.0) last_positive = i;
    acc += probs[i];
    if (u < acc) return i;
  }
  return last_positive;
}

// 53 random bits mapped to [0, 1); unlike std::uniform_real_distribution this
// is specified exactly, so sampled paths match across standard libraries.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

OracleResult brute_force_conditional_entropies(const HmmModel& model, const SimplexVector& nu, int n,
                                               const OracleConfig& config) {
  check_depth(n);
  if (nu.dimension() != model.num_states()) throw InvalidArgument("initial belief dimension does not match model");
  const ConditionalPair pair = conditional_entropies(model, nu, n, config);
  OracleResult r;
  r.depth = n;
  r.H_Z_cond = pair.next_symbol;
  r.H_SZ_cond = pair.state;
  return r;
}

EntropyBounds entropy_bounds(const HmmModel& model, int n, const OracleConfig& config) {
  check_depth(n);
  const SimplexVector stationary = stationary_distribution(model.transition());
  EntropyBounds b;
  b.upper = conditional_entropies(model, stationary, n, config).next_symbol;
  for (std::size_t s = 0; s < model.num_states(); ++s) {
    if (stationary[s] == 0.0) continue;
    const SimplexVector prediction = SimplexVector::from_weights(
        std::vector<double>(model.transition_row(s).begin(), model.transition_row(s).end()));
    b.lower += stationary[s] * conditional_entropies(model, prediction, n - 1, config).next_symbol;
  }
  return b;
}

double block_entropy_rate(const HmmModel& model, const SimplexVector& nu, int n, const OracleConfig& config) {
  check_depth(n);
  check_budget(model, n);
  const BeliefUpdateConfig update{true, config.zero_prob_policy};
  double h = 0.0;
  for_each_word(model.num_obs(), n, [&](std::span<const Symbol> word) {
    const double q = sequence_probability(model, nu, word, update);
    if (q > 0.0) h -= q * (config.base == LogBase::Two ? std::log2(q) : std::log(q));
  });
  return h / n;
}

OracleResult oracle_report(const HmmModel& model, const SimplexVector& nu, int n, const OracleConfig& config) {
  OracleResult r = brute_force_conditional_entropies(model, nu, n, config);
  const EntropyBounds b = entropy_bounds(model, n, config);
  r.lower_bound = b.lower;
  r.upper_bound = b.upper;
  r.block_entropy_rate = block_entropy_rate(model, nu, n, config);
  return r;
}

MonteCarloEstimate monte_carlo_entropy(const HmmModel& model, std::uint64_t num_samples, int n, std::uint64_t seed,
                                       LogBase base) {
  if (num_samples < 1) throw InvalidArgument("need at least one sample");
  check_depth(n);
  const SimplexVector stationary = stationary_distribution(model.transition());
  const std::size_t ns = model.num_states();

  std::mt19937_64 rng(seed);
  std::vector<double> belief(ns);
  std::vector<double> next(ns);
  std::vector<double> predictive(model.num_obs());

  // Welford running mean and sum of squared deviations.
  double mean = 0.0;
  double m2 = 0.0;
  for (std::uint64_t i = 0; i < num_samples; ++i) {
    std::size_t state = sample_index(stationary.entries(), uniform01(rng));
    std::copy(stationary.entries().begin(), stationary.entries().end(), belief.begin());
    for (int t = 0; t < n; ++t) {
      const Symbol z = sample_index(model.emission_row(state), uniform01(rng));
      if (eta_into(model, z, belief, next) == 0.0) {
        throw ZeroProbabilityError("sampled observation has zero filtered probability");
      }
      belief.swap(next);
      state = sample_index(model.transition_row(state), uniform01(rng));
    }
    zeta_into(model, belief, predictive);
    const Symbol z = sample_index(model.emission_row(state), uniform01(rng));
    const double q = predictive[z];
    if (!(q > 0.0)) throw ZeroProbabilityError("sampled observation has zero predictive probability");
    const double x = q >= 1.0 ? 0.0 : -(base == LogBase::Two ? std::log2(q) : std::log(q));

    const double delta = x - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (x - mean);
  }

  MonteCarloEstimate out;
  out.estimate = mean;
  if (num_samples > 1) {
    const double variance = m2 / static_cast<double>(num_samples - 1);
    out.std_error = std::sqrt(variance / static_cast<double>(num_samples));
  }
  return out;
}

}  // namespace hmp
