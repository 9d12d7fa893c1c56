#include <CLI11.hpp>
#include <iostream>
#include <map>

#include "cli.hpp"

namespace {

using hmp::cli::NuChoice;
using hmp::cli::RunConfig;
using hmp::cli::Subcommand;

const std::map<std::string, NuChoice> kNuChoices{
    {"stationary", NuChoice::Stationary}, {"uniform", NuChoice::Uniform}, {"file", NuChoice::File}};
const std::map<std::string, hmp::LogBase> kBases{{"2", hmp::LogBase::Two}, {"e", hmp::LogBase::E}};
const std::map<std::string, hmp::ExpansionMode> kModes{{"exact", hmp::ExpansionMode::Exact},
                                                        {"merged", hmp::ExpansionMode::Merged}};

void add_model(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("model", cfg.model_path, "Model file (hmp 1 format)")->required();
}

void add_nu(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--nu", cfg.nu, "Initial belief: stationary, uniform or file (default: file if present, else stationary)")
      ->transform(CLI::CheckedTransformer(kNuChoices, CLI::ignore_case));
}

void add_base(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--base", cfg.base, "Logarithm base: 2 (bits) or e (nats)")
      ->transform(CLI::CheckedTransformer(kBases, CLI::ignore_case));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entropy rate and estimation entropy of hidden Markov processes"};
  app.require_subcommand(1);

  RunConfig cfg;

  auto* info = app.add_subcommand("info", "Validate the model and analyze its Markov chain");
  add_model(info, cfg);
  add_base(info, cfg);

  auto* analyze = app.add_subcommand("analyze", "Expand the belief support and emit the entropy series as CSV");
  add_model(analyze, cfg);
  analyze->add_option("--depth", cfg.depth, "Maximum level (default 20)");
  add_nu(analyze, cfg);
  analyze->add_option("--mode", cfg.mode, "exact or merged (default merged)")->transform(CLI::CheckedTransformer(kModes, CLI::ignore_case));
  analyze->add_option("--merge-tol", cfg.merge_tol, "l-inf merge radius (merged mode, default 1e-4)");
  analyze->add_option("--prune-tol", cfg.prune_tol, "Mass floor below which points are dropped (merged mode)");
  analyze->add_option("--max-points", cfg.max_points, "Support size cap");
  analyze->add_option("--eps", cfg.eps, "Convergence threshold on successive differences");
  analyze->add_option("--streak", cfg.streak, "Consecutive levels below eps required");
  add_base(analyze, cfg);
  analyze->add_option("--out", cfg.out_path, "Write CSV here instead of stdout");
  analyze->add_flag("--allow-partial", cfg.allow_partial, "Accept emission matrices with zero entries");
  analyze->add_flag("--full", cfg.full, "Compute every level up to --depth even after convergence");

  auto* oracle = app.add_subcommand("oracle", "Brute-force conditional entropies, bounds and block entropy");
  add_model(oracle, cfg);
  oracle->add_option("--depth", cfg.depth, "Maximum word length (default 5)");
  add_nu(oracle, cfg);
  add_base(oracle, cfg);
  oracle->add_flag("--allow-partial", cfg.allow_partial, "Accept emission matrices with zero entries");

  auto* sample = app.add_subcommand("sample", "Monte Carlo estimate of H(Z_n | Z_0^{n-1})");
  add_model(sample, cfg);
  sample->add_option("--samples", cfg.num_samples, "Number of sampled paths (default 100000)");
  sample->add_option("--depth", cfg.depth, "Conditioning length n (default 15)");
  sample->add_option("--seed", cfg.seed, "Random seed (default 0)");
  add_base(sample, cfg);
  sample->add_flag("--allow-partial", cfg.allow_partial, "Accept emission matrices with zero entries");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : hmp::cli::kExitInput;
  }

  if (info->parsed()) cfg.subcommand = Subcommand::Info;
  if (analyze->parsed()) cfg.subcommand = Subcommand::Analyze;
  if (oracle->parsed()) cfg.subcommand = Subcommand::Oracle;
  if (sample->parsed()) cfg.subcommand = Subcommand::Sample;
  return hmp::cli::run(cfg, std::cout, std::cerr);
}
