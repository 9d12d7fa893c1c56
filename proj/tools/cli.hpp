#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "hmp/expansion.hpp"
#include "hmp/simplex.hpp"

namespace hmp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitCap = 3;

enum class Subcommand { Info, Analyze, Oracle, Sample };

enum class NuChoice {
  Default,  // the model's `nu` section if present, else stationary
  Stationary,
  Uniform,
  File,
};

struct RunConfig {
  Subcommand subcommand = Subcommand::Info;
  std::string model_path;
  std::optional<int> depth;  // per-subcommand default when unset
  double eps = 1e-4;
  int streak = 2;
  ExpansionMode mode = ExpansionMode::Merged;
  std::optional<double> merge_tol;
  double prune_tol = 0.0;
  std::size_t max_points = ExpansionConfig{}.max_points;
  std::uint64_t num_samples = 100000;
  std::uint64_t seed = 0;
  NuChoice nu = NuChoice::Default;
  LogBase base = LogBase::Two;
  std::optional<std::string> out_path;
  bool allow_partial = false;
  bool full = false;  // analyze: keep expanding after convergence
};

// Each returns the process exit code; reports go to `out`, diagnostics to `err`.
int run_info(const RunConfig& config, std::ostream& out, std::ostream& err);
int run_analyze(const RunConfig& config, std::ostream& out, std::ostream& err);
int run_oracle(const RunConfig& config, std::ostream& out, std::ostream& err);
int run_sample(const RunConfig& config, std::ostream& out, std::ostream& err);
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// 12 significant digits; integral values keep a trailing ".0".
std::string format_number(double v);

}  // namespace hmp::cli
