#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "pdsynth/errors.hpp"
#include "pdsynth/pipeline.hpp"
#include "pdsynth/version.hpp"

namespace {

constexpr int kExitInput = 2;
constexpr int kExitBudget = 3;
constexpr int kExitVerify = 4;

struct CommonArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::string out_dir = "out";
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "run configuration file")
      ->required();
  cmd->add_option("--seed", args.seed, "override the config RNG seed");
  cmd->add_option("--workers", args.workers, "override the worker count");
  cmd->add_option("--out", args.out_dir, "output directory");
}

pdsynth::RunConfig load(const CommonArgs& args) {
  auto cfg = pdsynth::load_config(args.config_path);
  if (args.seed) cfg.seed = *args.seed;
  if (args.workers) cfg.workers = *args.workers;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pdsynth: privacy-preserving synthetic data generator"};
  app.set_version_flag("--version", pdsynth::kVersion);
  app.require_subcommand(1);

  CommonArgs learn_args, generate_args, verify_args, metrics_args;
  auto* learn = app.add_subcommand("learn", "learn a generative model");
  add_common(learn, learn_args);
  auto* generate =
      app.add_subcommand("generate", "generate and test synthetic records");
  add_common(generate, generate_args);
  auto* verify =
      app.add_subcommand("verify", "run the small-universe verification sweeps");
  add_common(verify, verify_args);
  auto* metrics =
      app.add_subcommand("metrics", "statistical distances and model error");
  add_common(metrics, metrics_args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (learn->parsed()) {
      const auto cfg = load(learn_args);
      const auto result = pdsynth::cmd_learn(cfg, learn_args.out_dir);
      std::cout << "model written to " << result.model_path << " (subsets "
                << result.n_synthesis << "/" << result.n_structure << "/"
                << result.n_parameter << ", dropped " << result.load.dropped
                << " rows)\n";
    } else if (generate->parsed()) {
      const auto cfg = load(generate_args);
      const auto stats = pdsynth::cmd_generate(cfg, generate_args.out_dir);
      std::cout << "released " << stats.released << " of " << stats.candidates
                << " candidates (" << stats.failed << " failed, "
                << stats.capped_failed << " capped) in " << stats.wall_seconds
                << "s\n";
    } else if (verify->parsed()) {
      const auto cfg = load(verify_args);
      const auto stats = pdsynth::cmd_verify(cfg, verify_args.out_dir);
      std::cout << "verification sweeps: " << stats.sweeps << ", violations: "
                << stats.violations << "\n";
      if (stats.violations > 0) return kExitVerify;
    } else if (metrics->parsed()) {
      const auto cfg = load(metrics_args);
      pdsynth::cmd_metrics(cfg, metrics_args.out_dir);
      std::cout << "metrics written to " << metrics_args.out_dir
                << "/metrics.csv\n";
    }
  } catch (const pdsynth::BudgetError& e) {
    std::cerr << "budget error: " << e.what() << "\n";
    return kExitBudget;
  } catch (const pdsynth::VerifyError& e) {
    std::cerr << "verification error: " << e.what() << "\n";
    return kExitVerify;
  } catch (const pdsynth::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return 0;
}
