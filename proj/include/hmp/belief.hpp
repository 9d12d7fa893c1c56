#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hmp/model.hpp"
#include "hmp/simplex.hpp"

namespace hmp {

using Symbol = std::size_t;
using Word = std::vector<Symbol>;

enum class ZeroProbPolicy {
  Reject,  // a zero-probability observation is an error
  Skip,    // zero-probability branches are never generated
};

struct BeliefUpdateConfig {
  bool renormalize = true;
  ZeroProbPolicy zero_prob_policy = ZeroProbPolicy::Reject;
};

// Information-state update: next = belief D(z) P / (belief D(z) 1), i.e.
// p(S_{n+1} | Z_n = z, pi_n = belief). Throws ZeroProbabilityError when the
// denominator vanishes, whatever the policy: under Skip the caller is expected
// never to ask for that pair.
SimplexVector eta(const HmmModel& model, Symbol z, const SimplexVector& belief, const BeliefUpdateConfig& config = {});

// Unchecked kernel behind eta. Writes the update into `out` and returns the
// denominator; on a zero denominator `out` is left untouched and 0 is returned.
double eta_into(const HmmModel& model, Symbol z, std::span<const double> belief, std::span<double> out,
                bool renormalize = true);

// Filtering recursion in the posterior variable alpha_n = p(S_n | Z^n):
// alpha' = alpha P D(z) / (alpha P T)[z]. Chains relate by pi = alpha P.
SimplexVector alpha_step(const HmmModel& model, Symbol z, const SimplexVector& alpha,
                         const BeliefUpdateConfig& config = {});

// Pr(Z_k^{k+n-1} = word | pi_k = belief) as the chain product of one-step
// predictive probabilities. Under Skip a zero factor ends the product with 0.
double sequence_probability(const HmmModel& model, const SimplexVector& belief, std::span<const Symbol> word,
                            const BeliefUpdateConfig& config = {});

// Left fold of eta over the word.
SimplexVector belief_after_word(const HmmModel& model, const SimplexVector& belief, std::span<const Symbol> word,
                                const BeliefUpdateConfig& config = {});

}  // namespace hmp
