#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "hmp/belief.hpp"
#include "hmp/model.hpp"
#include "hmp/simplex.hpp"

namespace hmp {

// Finite weighted point set on the state simplex, stored flat: point i has
// coordinates coords[i*dimension, (i+1)*dimension) and mass masses[i].
struct WeightedPoints {
  std::size_t dimension = 0;
  std::vector<double> coords;
  std::vector<double> masses;

  std::size_t size() const { return masses.size(); }
  std::span<const double> point(std::size_t i) const { return {coords.data() + i * dimension, dimension}; }
  void add(std::span<const double> belief, double mass);
  void reserve(std::size_t n);
  double total_mass() const;
};

// The level-n pushforward of a point mass under the belief dynamics: beliefs
// reachable by words of length n, weighted by the word probabilities.
class BeliefSupport {
 public:
  static BeliefSupport point_mass(const SimplexVector& nu);

  BeliefSupport(WeightedPoints points, int level, double dropped_mass, std::size_t merge_count);

  const WeightedPoints& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  std::span<const double> belief(std::size_t i) const { return points_.point(i); }
  double mass(std::size_t i) const { return points_.masses[i]; }

  int level() const { return level_; }
  double dropped_mass() const { return dropped_mass_; }
  std::size_t merge_count() const { return merge_count_; }

 private:
  WeightedPoints points_;
  int level_ = 0;
  double dropped_mass_ = 0.0;
  std::size_t merge_count_ = 0;
};

// Merging by centroid perturbs the entropy sums only at second order in the
// radius; at 1e-4 the reference 4-state model keeps ~2e5 points per level.
inline constexpr double kDefaultMergeTol = 1e-4;

enum class ExpansionMode {
  Exact,   // only bitwise-identical beliefs are consolidated; nothing is pruned
  Merged,  // l-inf clustering at merge_tol and a mass floor at prune_tol
};

struct ExpansionConfig {
  ExpansionMode mode = ExpansionMode::Exact;
  double merge_tol = 0.0;
  double prune_tol = 0.0;
  std::size_t max_points = 10'000'000;
  int max_depth = 1000;
  LogBase base = LogBase::Two;
  ZeroProbPolicy zero_prob_policy = ZeroProbPolicy::Reject;

  static ExpansionConfig exact() { return {}; }
  static ExpansionConfig merged(double merge_tol = kDefaultMergeTol, double prune_tol = 0.0) {
    ExpansionConfig c;
    c.mode = ExpansionMode::Merged;
    c.merge_tol = merge_tol;
    c.prune_tol = prune_tol;
    return c;
  }

  double effective_merge_tol() const { return mode == ExpansionMode::Exact ? 0.0 : merge_tol; }
  double effective_prune_tol() const { return mode == ExpansionMode::Exact ? 0.0 : prune_tol; }
};

struct SeriesRow {
  int n = 0;
  double H_Z = 0.0;   // sum_i m_i h(u_i T)
  double H_SZ = 0.0;  // sum_i m_i h(u_i)
  std::size_t support_size = 0;
  double dropped_mass = 0.0;
};

struct Limits {
  double entropy_rate = 0.0;
  double estimation_entropy = 0.0;
};

struct Convergence {
  int level = 0;
  Limits limits;
};

struct EntropySeries {
  std::vector<SeriesRow> rows;
  std::optional<int> converged_at;
  std::optional<Limits> limits;
};

struct StopRule {
  double eps = 1e-4;
  int streak = 2;
};

struct SeriesOptions {
  // Stop as soon as the rule is met; the series then records the limits.
  std::optional<StopRule> stop;
  // Called after each level, before the next one is expanded.
  std::function<void(const SeriesRow&)> on_row;
};

// Sorts points lexicographically by coordinates, then greedily folds every
// point within l-inf distance merge_tol of the current cluster's first point
// into that cluster, emitted at its mass-weighted centroid. merge_tol = 0
// consolidates exact duplicates only, leaving their coordinates bit-identical.
WeightedPoints merge_support(const WeightedPoints& points, double merge_tol);

// One step of the pushforward: every (v, m) spawns (eta(z, v), m * zeta(v)[z])
// for each z of positive probability, then merging and pruning apply.
// Throws CapacityExceeded when the children would exceed max_points, and
// InvalidArgument for a model with zero emissions under the reject policy.
BeliefSupport expand_level(const BeliefSupport& support, const HmmModel& model, const ExpansionConfig& config);

// H_Z^n and H_SZ^n for n = 1..depth from the point mass at nu.
EntropySeries entropy_series(const HmmModel& model, const SimplexVector& nu, int depth, const ExpansionConfig& config,
                             const SeriesOptions& options = {});

// Row-level entropies of a support, summed in its stored (sorted) order.
SeriesRow support_entropies(const BeliefSupport& support, const HmmModel& model, LogBase base);

// First level n* closing a run of `streak` consecutive levels whose
// differences from their predecessors are below eps in both columns.
std::optional<Convergence> detect_convergence(const EntropySeries& series, double eps, int streak);

}  // namespace hmp
