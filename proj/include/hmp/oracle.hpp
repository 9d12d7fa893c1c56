#pragma once

#include <cstdint>

#include "hmp/belief.hpp"
#include "hmp/model.hpp"
#include "hmp/simplex.hpp"

namespace hmp {

// Word enumeration refuses jobs above |Z|^n * |S| terms.
inline constexpr double kEnumerationBudget = 1e8;

struct OracleConfig {
  LogBase base = LogBase::Two;
  ZeroProbPolicy zero_prob_policy = ZeroProbPolicy::Reject;
};

struct OracleResult {
  int depth = 0;
  double H_Z_cond = 0.0;            // H(Z_n | Z_0^{n-1}, pi_0 = nu)
  double H_SZ_cond = 0.0;           // H(S_n | Z_0^{n-1}, pi_0 = nu)
  double lower_bound = 0.0;         // H(Z_n | Z_0^{n-1}, S_0), stationary start
  double upper_bound = 0.0;         // H(Z_n | Z_0^{n-1}), stationary start
  double block_entropy_rate = 0.0;  // H(Z_0^{n-1} | pi_0 = nu) / n
};

struct EntropyBounds {
  double lower = 0.0;
  double upper = 0.0;
};

struct MonteCarloEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

// Enumerates every observation word of length n and sums the word
// probability times the entropy of the next-symbol (and current-state)
// distribution after the word. Fills depth, H_Z_cond and H_SZ_cond only.
OracleResult brute_force_conditional_entropies(const HmmModel& model, const SimplexVector& nu, int n,
                                               const OracleConfig& config = {});

// Stationary sandwich H(Z_n|Z_0^{n-1}, S_0) <= rate <= H(Z_n|Z_0^{n-1}).
// Given S_0 = s the past symbol Z_0 carries nothing more about the future, so
// the lower term is sum_s x*[s] times the depth-(n-1) conditional entropy
// started from the one-step prediction e_s P.
EntropyBounds entropy_bounds(const HmmModel& model, int n, const OracleConfig& config = {});

// -(1/n) sum_w q_w(nu) log q_w(nu) over words of length n.
double block_entropy_rate(const HmmModel& model, const SimplexVector& nu, int n, const OracleConfig& config = {});

// All OracleResult fields at depth n.
OracleResult oracle_report(const HmmModel& model, const SimplexVector& nu, int n, const OracleConfig& config = {});

// Samples state/observation paths of length n+1 from the stationary
// distribution and averages -log rho_n[z_n], rho_n being the filtered
// one-step prediction after z_0..z_{n-1}. Deterministic for a fixed seed.
MonteCarloEstimate monte_carlo_entropy(const HmmModel& model, std::uint64_t num_samples, int n, std::uint64_t seed,
                                       LogBase base = LogBase::Two);

}  // namespace hmp
