#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "hmp/errors.hpp"
#include "hmp/markov.hpp"
#include "hmp/model.hpp"
#include "hmp/oracle.hpp"

namespace hmp::cli {

namespace {

constexpr int kDefaultAnalyzeDepth = 20;
constexpr int kDefaultOracleDepth = 5;
constexpr int kDefaultSampleDepth = 15;
constexpr double kOracleAgreement = 1e-10;

const char* unit_name(LogBase base) { return base == LogBase::Two ? "bits" : "nats"; }

std::string join(std::span<const double> v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + format_number(v[i]);
  return s;
}

// Runs body and maps library errors onto the exit-code contract.
int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const CapacityExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kExitCap;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
}

// Loads the model and applies the zero-emission and primitivity gates shared
// by analyze, oracle and sample.
HmmModel load_checked(const RunConfig& config, std::ostream& err) {
  HmmModel model = load_model(config.model_path);
  const ValidationReport report = validate_with_chain(model);
  if (report.has_zero_emissions) {
    if (!config.allow_partial) {
      throw InvalidArgument("emission matrix T has zero entries; rerun with --allow-partial to expand it anyway");
    }
    err << "caveat: T has zero entries; zero-probability branches are skipped and the "
           "convergence guarantees do not apply\n";
  }
  if (report.is_primitive_P && !*report.is_primitive_P) {
    err << "caveat: P is not primitive; limits are not guaranteed to be independent of the initial belief\n";
  }
  return model;
}

SimplexVector resolve_nu(const RunConfig& config, const HmmModel& model) {
  switch (config.nu) {
    case NuChoice::Uniform:
      return SimplexVector::uniform(model.num_states());
    case NuChoice::File:
      if (!model.initial_belief()) throw InvalidArgument("--nu file given but the model has no 'nu' section");
      return *model.initial_belief();
    case NuChoice::Default:
      if (model.initial_belief()) return *model.initial_belief();
      [[fallthrough]];
    case NuChoice::Stationary:
      return stationary_distribution(model.transition());
  }
  return stationary_distribution(model.transition());
}

ExpansionConfig expansion_config(const RunConfig& config) {
  ExpansionConfig ec;
  ec.mode = config.mode;
  ec.base = config.base;
  ec.max_points = config.max_points;
  ec.zero_prob_policy = config.allow_partial ? ZeroProbPolicy::Skip : ZeroProbPolicy::Reject;
  if (config.mode == ExpansionMode::Exact) {
    if (config.merge_tol.value_or(0.0) != 0.0 || config.prune_tol != 0.0) {
      throw InvalidArgument("exact mode does not merge or prune; use --mode merged for nonzero tolerances");
    }
  } else {
    ec.merge_tol = config.merge_tol.value_or(kDefaultMergeTol);
    ec.prune_tol = config.prune_tol;
  }
  if (ec.merge_tol < 0.0 || ec.prune_tol < 0.0) throw InvalidArgument("tolerances must be nonnegative");
  return ec;
}

int positive_depth(const RunConfig& config, int fallback) {
  const int depth = config.depth.value_or(fallback);
  if (depth < 1) throw InvalidArgument("--depth must be at least 1");
  return depth;
}

void write_csv_row(std::ostream& csv, const SeriesRow& row, const SeriesRow* prev) {
  csv << row.n << ',' << row.support_size << ',' << format_number(row.H_Z) << ',' << format_number(row.H_SZ) << ','
      << format_number(row.dropped_mass) << ',';
  if (prev) csv << format_number(row.H_Z - prev->H_Z) << ',' << format_number(row.H_SZ - prev->H_SZ);
  else csv << ',';
  csv << '\n';
}

}  // namespace

std::string format_number(double v) {
  if (v == 0.0) v = 0.0;  // folds -0.0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  std::string s(buf);
  if (std::isfinite(v) && s.find_first_of(".en") == std::string::npos) s += ".0";
  return s;
}

int run_info(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const HmmModel model = load_model(config.model_path);
    const ValidationReport report = validate_with_chain(model);
    const ChainAnalysis chain = analyze_chain(model.transition(), config.base);

    out << "model: " << config.model_path << "\n";
    out << "states: " << model.num_states() << "\n";
    out << "observations: " << model.num_obs() << "\n";
    double worst = 0.0;
    for (const RowDefect& d : report.row_sum_defects) worst = std::max(worst, std::abs(d.defect));
    out << "max row-sum defect: " << format_number(worst) << "\n";
    out << "zero emissions: " << (report.has_zero_emissions ? "yes" : "no") << "\n";
    for (const std::string& w : report.warnings) out << "warning: " << w << "\n";
    out << "primitive: " << (chain.is_primitive ? "true" : "false");
    if (chain.primitivity_witness) out << " (P^" << *chain.primitivity_witness << " > 0)";
    out << "\n";
    if (!chain.is_primitive) {
      out << "caveat: without a primitive P the entropy limits may differ between initial beliefs\n";
    }
    out << "stationary: " << join(chain.stationary.entries()) << "\n";
    out << "markov entropy rate: " << format_number(chain.markov_entropy_rate) << " " << unit_name(config.base)
        << "\n";
    return kExitOk;
  });
}

int run_analyze(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const HmmModel model = load_checked(config, err);
    const SimplexVector nu = resolve_nu(config, model);
    const ExpansionConfig ec = expansion_config(config);
    const int depth = positive_depth(config, kDefaultAnalyzeDepth);
    if (!(config.eps > 0.0) || config.streak < 1) throw InvalidArgument("--eps must be > 0 and --streak >= 1");

    std::ofstream file;
    if (config.out_path) {
      file.open(*config.out_path);
      if (!file) throw InvalidArgument("cannot open output file '" + *config.out_path + "'");
    }
    std::ostream& csv = config.out_path ? static_cast<std::ostream&>(file) : out;

    csv << "n,support_size,H_Z,H_SZ,dropped_mass,delta_HZ,delta_HSZ\n";
    std::optional<SeriesRow> prev;
    SeriesOptions options;
    if (!config.full) options.stop = StopRule{config.eps, config.streak};
    options.on_row = [&](const SeriesRow& row) {
      write_csv_row(csv, row, prev ? &*prev : nullptr);
      csv.flush();
      prev = row;
    };

    EntropySeries series = entropy_series(model, nu, depth, ec, options);
    if (config.full) {
      if (auto conv = detect_convergence(series, config.eps, config.streak)) {
        series.converged_at = conv->level;
        series.limits = conv->limits;
      }
    }

    if (series.converged_at) {
      out << "# converged_at=" << *series.converged_at << " entropy_rate=" << format_number(series.limits->entropy_rate)
          << " estimation_entropy=" << format_number(series.limits->estimation_entropy) << " "
          << unit_name(config.base) << "\n";
    } else {
      out << "# not converged within depth " << depth << " (eps=" << format_number(config.eps)
          << ", streak=" << config.streak << ")\n";
    }
    return kExitOk;
  });
}

int run_oracle(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const HmmModel model = load_checked(config, err);
    const SimplexVector nu = resolve_nu(config, model);
    const int depth = positive_depth(config, kDefaultOracleDepth);
    const OracleConfig oc{config.base, config.allow_partial ? ZeroProbPolicy::Skip : ZeroProbPolicy::Reject};

    RunConfig exact = config;
    exact.mode = ExpansionMode::Exact;
    exact.merge_tol.reset();
    exact.prune_tol = 0.0;
    const EntropySeries engine = entropy_series(model, nu, depth, expansion_config(exact));

    out << "n,H_Z,H_SZ,lower,upper,block_rate,engine_dev\n";
    std::vector<int> disagreements;
    for (int n = 1; n <= depth; ++n) {
      const OracleResult r = oracle_report(model, nu, n, oc);
      const SeriesRow& row = engine.rows[static_cast<std::size_t>(n - 1)];
      const double dev = std::max(std::abs(row.H_Z - r.H_Z_cond), std::abs(row.H_SZ - r.H_SZ_cond));
      if (dev > kOracleAgreement) disagreements.push_back(n);
      out << n << ',' << format_number(r.H_Z_cond) << ',' << format_number(r.H_SZ_cond) << ','
          << format_number(r.lower_bound) << ',' << format_number(r.upper_bound) << ','
          << format_number(r.block_entropy_rate) << ',' << format_number(dev) << '\n';
    }
    if (disagreements.empty()) {
      out << "# exact expansion agrees with enumeration within 1e-10\n";
    } else {
      for (int n : disagreements) {
        out << "# DISAGREEMENT at n=" << n << "\n";
        err << "warning: exact expansion deviates from enumeration by more than 1e-10 at n=" << n << "\n";
      }
    }
    return kExitOk;
  });
}

int run_sample(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const HmmModel model = load_checked(config, err);
    const int depth = positive_depth(config, kDefaultSampleDepth);
    if (config.num_samples < 1) throw InvalidArgument("--samples must be at least 1");
    const MonteCarloEstimate mc = monte_carlo_entropy(model, config.num_samples, depth, config.seed, config.base);
    out << format_number(mc.estimate) << " ± " << format_number(mc.std_error) << " " << unit_name(config.base)
        << " (n=" << depth << ", samples=" << config.num_samples << ", seed=" << config.seed << ")\n";
    return kExitOk;
  });
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  switch (config.subcommand) {
    case Subcommand::Info:
      return run_info(config, out, err);
    case Subcommand::Analyze:
      return run_analyze(config, out, err);
    case Subcommand::Oracle:
      return run_oracle(config, out, err);
    case Subcommand::Sample:
      return run_sample(config, out, err);
  }
  return kExitInput;
}

}  // namespace hmp::cli
