#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hmp {

enum class LogBase { Two, E };

// Absolute tolerance on the sum of a probability vector.
inline constexpr double kSimplexSumTolerance = 1e-9;

// A point of the probability simplex: nonnegative entries summing to one.
//
// Construction validates and renormalizes, so every live instance satisfies
// the invariant up to floating-point rounding.
class SimplexVector {
 public:
  // Throws InvalidArgument on an empty vector, a negative or non-finite
  // entry, or a sum further than kSimplexSumTolerance from 1.
  explicit SimplexVector(std::vector<double> entries);

  static SimplexVector uniform(std::size_t dimension);
  static SimplexVector unit(std::size_t dimension, std::size_t index);

  // Renormalizes nonnegative weights with a positive total; the total itself
  // is not checked against 1.
  static SimplexVector from_weights(std::vector<double> weights);

  std::size_t dimension() const { return entries_.size(); }
  std::span<const double> entries() const { return entries_; }
  double operator[](std::size_t i) const { return entries_[i]; }

  const std::vector<double>& to_vector() const { return entries_; }

  friend bool operator==(const SimplexVector&, const SimplexVector&) = default;

 private:
  struct Trusted {};
  SimplexVector(std::vector<double> entries, Trusted) : entries_(std::move(entries)) {}

  std::vector<double> entries_;
};

// Shannon entropy with 0 log 0 = 0.
double entropy(std::span<const double> dist, LogBase base = LogBase::Two);

inline double entropy(const SimplexVector& dist, LogBase base = LogBase::Two) {
  return entropy(dist.entries(), base);
}

// Divides by the sum in place; returns the sum that was divided out.
double normalize_in_place(std::span<double> values);

double max_abs_diff(std::span<const double> a, std::span<const double> b);

}  // namespace hmp
