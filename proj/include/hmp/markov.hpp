#pragma once

#include <optional>

#include "hmp/model.hpp"
#include "hmp/simplex.hpp"

namespace hmp {

struct PrimitivityResult {
  bool primitive = false;
  // Smallest n with P^n entrywise positive, when primitive.
  std::optional<int> witness;
};

struct ChainAnalysis {
  bool is_primitive = false;
  std::optional<int> primitivity_witness;
  SimplexVector stationary = SimplexVector::uniform(1);
  double markov_entropy_rate = 0.0;
};

// Exact test on the zero pattern of P: powers of the boolean reachability
// matrix are checked up to the Wielandt bound (|S|-1)^2 + 1.
PrimitivityResult is_primitive(const Matrix& transition);

// Solves x P = x, sum(x) = 1 by a direct LU solve in which the normalization
// replaces one balance equation. Throws SingularSystemError when the system is
// singular (several closed classes) or the solution leaves the simplex.
SimplexVector stationary_distribution(const Matrix& transition);

// sum_i x*[i] h(P row i).
double markov_entropy_rate(const Matrix& transition, LogBase base = LogBase::Two);

ChainAnalysis analyze_chain(const Matrix& transition, LogBase base = LogBase::Two);

// validate_model plus the primitivity check on P.
ValidationReport validate_with_chain(const HmmModel& model);

}  // namespace hmp
