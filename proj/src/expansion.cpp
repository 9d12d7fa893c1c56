#include "hmp/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hmp/errors.hpp"

namespace hmp {

void WeightedPoints::add(std::span<const double> belief, double mass) {
  coords.insert(coords.end(), belief.begin(), belief.end());
  masses.push_back(mass);
}

void WeightedPoints::reserve(std::size_t n) {
  coords.reserve(n * dimension);
  masses.reserve(n);
}

double WeightedPoints::total_mass() const { return std::accumulate(masses.begin(), masses.end(), 0.0); }

BeliefSupport BeliefSupport::point_mass(const SimplexVector& nu) {
  WeightedPoints pts;
  pts.dimension = nu.dimension();
  pts.add(nu.entries(), 1.0);
  return BeliefSupport(std::move(pts), 0, 0.0, 0);
}

BeliefSupport::BeliefSupport(WeightedPoints points, int level, double dropped_mass, std::size_t merge_count)
    : points_(std::move(points)), level_(level), dropped_mass_(dropped_mass), merge_count_(merge_count) {}

namespace {

// Lexicographic by coordinates, then by mass, so the order depends only on
// the multiset of points and not on how they were generated.
std::vector<std::size_t> sorted_order(const WeightedPoints& points) {
  const std::size_t dim = points.dimension;
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const double* base = points.coords.data();
  const double* mass = points.masses.data();
  std::sort(order.begin(), order.end(), [base, mass, dim](std::size_t a, std::size_t b) {
    const double* pa = base + a * dim;
    const double* pb = base + b * dim;
    for (std::size_t j = 0; j < dim; ++j) {
      if (pa[j] < pb[j]) return true;
      if (pb[j] < pa[j]) return false;
    }
    if (mass[a] != mass[b]) return mass[a] < mass[b];
    return a < b;
  });
  return order;
}

}  // namespace

WeightedPoints merge_support(const WeightedPoints& points, double merge_tol) {
  if (!(merge_tol >= 0.0)) throw InvalidArgument("merge tolerance must be nonnegative");
  const std::size_t n = points.size();
  const std::size_t dim = points.dimension;
  const std::vector<std::size_t> order = sorted_order(points);

  // Sorted by first coordinate, so every candidate within merge_tol of a
  // representative lies in the window that follows it.
  WeightedPoints out;
  out.dimension = dim;
  std::vector<char> taken(n, 0);
  std::vector<double> offset(dim);
  bool any_moved = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (taken[i]) continue;
    const std::span<const double> rep = points.point(order[i]);
    double mass = points.masses[order[i]];
    std::fill(offset.begin(), offset.end(), 0.0);
    bool moved = false;
    for (std::size_t j = i + 1; j < n; ++j) {
      const std::span<const double> cand = points.point(order[j]);
      if (cand[0] - rep[0] > merge_tol) break;
      if (taken[j] || max_abs_diff(rep, cand) > merge_tol) continue;
      taken[j] = 1;
      const double m = points.masses[order[j]];
      for (std::size_t k = 0; k < dim; ++k) {
        const double d = cand[k] - rep[k];
        if (d != 0.0) moved = true;
        offset[k] += m * d;
      }
      mass += m;
    }
    // Centroid written as rep + sum m (p - rep) / M, so exact duplicates
    // leave the representative untouched.
    const std::size_t first = out.coords.size();
    out.add(rep, mass);
    if (moved) {
      any_moved = true;
      std::span<double> c(out.coords.data() + first, dim);
      for (std::size_t k = 0; k < dim; ++k) c[k] = std::max(0.0, c[k] + offset[k] / mass);
      normalize_in_place(c);
    }
  }
  if (!any_moved) return out;

  // Centroids may have crossed their neighbours.
  WeightedPoints sorted;
  sorted.dimension = dim;
  sorted.reserve(out.size());
  for (std::size_t i : sorted_order(out)) sorted.add(out.point(i), out.masses[i]);
  return sorted;
}

BeliefSupport expand_level(const BeliefSupport& support, const HmmModel& model, const ExpansionConfig& config) {
  const std::size_t ns = model.num_states();
  const std::size_t nz = model.num_obs();
  if (support.points().dimension != ns) {
    throw InvalidArgument("support dimension " + std::to_string(support.points().dimension) +
                          " does not match model with " + std::to_string(ns) + " states");
  }
  if (!model.strictly_positive_emissions() && config.zero_prob_policy == ZeroProbPolicy::Reject) {
    throw InvalidArgument("emission matrix has zero entries; expansion requires the skip policy (--allow-partial)");
  }
  const double merge_tol = config.effective_merge_tol();
  const double prune_tol = config.effective_prune_tol();
  if (merge_tol < 0.0 || prune_tol < 0.0) throw InvalidArgument("tolerances must be nonnegative");

  const std::size_t children = support.size() * nz;
  if (children > config.max_points) {
    throw CapacityExceeded("level " + std::to_string(support.level() + 1) + " needs " + std::to_string(children) +
                           " points, cap is " + std::to_string(config.max_points) +
                           "; use merged mode or a smaller depth");
  }

  WeightedPoints next;
  next.dimension = ns;
  next.reserve(children);
  std::vector<double> predictive(nz);
  std::vector<double> child(ns);
  for (std::size_t i = 0; i < support.size(); ++i) {
    const auto parent = support.belief(i);
    const double m = support.mass(i);
    zeta_into(model, parent, predictive);
    for (std::size_t z = 0; z < nz; ++z) {
      if (!(predictive[z] > 0.0)) {
        if (config.zero_prob_policy == ZeroProbPolicy::Skip) continue;
        throw ZeroProbabilityError("observation " + std::to_string(z) + " has zero probability at level " +
                                   std::to_string(support.level()));
      }
      const double child_mass = m * predictive[z];
      if (!(child_mass > 0.0)) continue;  // underflow
      eta_into(model, z, parent, child);
      next.add(child, child_mass);
    }
  }

  const std::size_t before = next.size();
  WeightedPoints merged = merge_support(next, merge_tol);
  std::size_t merges = support.merge_count() + (before - merged.size());

  double dropped = support.dropped_mass();
  if (prune_tol > 0.0) {
    WeightedPoints kept;
    kept.dimension = ns;
    kept.reserve(merged.size());
    for (std::size_t i = 0; i < merged.size(); ++i) {
      if (merged.masses[i] < prune_tol) {
        dropped += merged.masses[i];
      } else {
        kept.add(merged.point(i), merged.masses[i]);
      }
    }
    merged = std::move(kept);
  }
  return BeliefSupport(std::move(merged), support.level() + 1, dropped, merges);
}

SeriesRow support_entropies(const BeliefSupport& support, const HmmModel& model, LogBase base) {
  SeriesRow row;
  row.n = support.level();
  row.support_size = support.size();
  row.dropped_mass = support.dropped_mass();
  std::vector<double> predictive(model.num_obs());
  for (std::size_t i = 0; i < support.size(); ++i) {
    const auto u = support.belief(i);
    zeta_into(model, u, predictive);
    row.H_Z += support.mass(i) * entropy(predictive, base);
    row.H_SZ += support.mass(i) * entropy(u, base);
  }
  return row;
}

EntropySeries entropy_series(const HmmModel& model, const SimplexVector& nu, int depth, const ExpansionConfig& config,
                             const SeriesOptions& options) {
  if (depth < 1) throw InvalidArgument("depth must be at least 1");
  if (depth > config.max_depth) {
    throw CapacityExceeded("depth " + std::to_string(depth) + " exceeds cap " + std::to_string(config.max_depth));
  }
  if (nu.dimension() != model.num_states()) {
    throw InvalidArgument("initial belief has dimension " + std::to_string(nu.dimension()) + ", model has " +
                          std::to_string(model.num_states()) + " states");
  }
  if (options.stop && (!(options.stop->eps > 0.0) || options.stop->streak < 1)) {
    throw InvalidArgument("stopping rule needs eps > 0 and streak >= 1");
  }

  EntropySeries series;
  BeliefSupport support = BeliefSupport::point_mass(nu);
  for (int n = 1; n <= depth; ++n) {
    support = expand_level(support, model, config);
    series.rows.push_back(support_entropies(support, model, config.base));
    if (options.on_row) options.on_row(series.rows.back());
    if (options.stop) {
      if (auto conv = detect_convergence(series, options.stop->eps, options.stop->streak)) {
        series.converged_at = conv->level;
        series.limits = conv->limits;
        break;
      }
    }
  }
  return series;
}

std::optional<Convergence> detect_convergence(const EntropySeries& series, double eps, int streak) {
  if (!(eps > 0.0) || streak < 1) throw InvalidArgument("convergence test needs eps > 0 and streak >= 1");
  int run = 0;
  for (std::size_t i = 1; i < series.rows.size(); ++i) {
    const SeriesRow& prev = series.rows[i - 1];
    const SeriesRow& cur = series.rows[i];
    const bool small = std::abs(cur.H_Z - prev.H_Z) < eps && std::abs(cur.H_SZ - prev.H_SZ) < eps;
    run = small ? run + 1 : 0;
    if (run >= streak) return Convergence{cur.n, {cur.H_Z, cur.H_SZ}};
  }
  return std::nullopt;
}

}  // namespace hmp
