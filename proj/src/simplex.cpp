#include "hmp/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hmp/errors.hpp"

namespace hmp {

SimplexVector::SimplexVector(std::vector<double> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw InvalidArgument("simplex vector must have positive dimension");
  double total = 0.0;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const double p = entries_[i];
    if (!std::isfinite(p) || p < 0.0) {
      throw InvalidArgument("simplex vector entry " + std::to_string(i) + " is not a probability: " +
                            std::to_string(p));
    }
    total += p;
  }
  if (std::abs(total - 1.0) > kSimplexSumTolerance) {
    throw InvalidArgument("simplex vector sums to " + std::to_string(total));
  }
  normalize_in_place(entries_);
}

SimplexVector SimplexVector::uniform(std::size_t dimension) {
  if (dimension == 0) throw InvalidArgument("simplex vector must have positive dimension");
  return SimplexVector(std::vector<double>(dimension, 1.0 / static_cast<double>(dimension)), Trusted{});
}

SimplexVector SimplexVector::unit(std::size_t dimension, std::size_t index) {
  if (index >= dimension) throw InvalidArgument("unit vector index out of range");
  std::vector<double> e(dimension, 0.0);
  e[index] = 1.0;
  return SimplexVector(std::move(e), Trusted{});
}

SimplexVector SimplexVector::from_weights(std::vector<double> weights) {
  if (weights.empty()) throw InvalidArgument("simplex vector must have positive dimension");
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) throw InvalidArgument("negative or non-finite weight");
  }
  const double total = normalize_in_place(weights);
  if (!(total > 0.0)) throw InvalidArgument("weights have zero total");
  return SimplexVector(std::move(weights), Trusted{});
}

double entropy(std::span<const double> dist, LogBase base) {
  double h = 0.0;
  for (double p : dist) {
    if (p > 0.0) h -= p * (base == LogBase::Two ? std::log2(p) : std::log(p));
  }
  // Rounding can leave -0.0 or a few ulps below zero on degenerate inputs.
  return h > 0.0 ? h : 0.0;
}

double normalize_in_place(std::span<double> values) {
  const double total = std::accumulate(values.begin(), values.end(), 0.0);
  if (total > 0.0) {
    for (double& v : values) v /= total;
  }
  return total;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace hmp
