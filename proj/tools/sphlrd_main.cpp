#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "sphlrd/harness.hpp"
#include "sphlrd/observe.hpp"
#include "sphlrd/reconstruct.hpp"
#include "sphlrd/rng.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

struct CommonArgs {
  std::string config_path;
  std::string out_path;
  std::string json_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> reps;
  std::optional<int> threads;
  bool quiet = false;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_json) {
  cmd->add_option("--config", args.config_path, "experiment config file")
      ->required();
  cmd->add_option("--out", args.out_path, "output path")->required();
  if (with_json)
    cmd->add_option("--json", args.json_path,
                    "per-replicate diagnostics sidecar (JSON)");
  cmd->add_option("--seed", args.seed, "override config seed");
  cmd->add_option("--reps", args.reps, "override config replicate count");
  cmd->add_option("--threads", args.threads, "override config worker count");
  cmd->add_flag("--quiet", args.quiet, "suppress progress and warnings");
}

sphlrd::ExperimentConfig load_config(const CommonArgs& args) {
  sphlrd::ExperimentConfig cfg = sphlrd::parse_config_file(args.config_path);
  if (args.seed) cfg.seed = *args.seed;
  if (args.reps) cfg.replicates = *args.reps;
  if (args.threads) cfg.threads = *args.threads;
  if (args.quiet) cfg.quiet = true;
  return cfg;
}

void write_series_csv(const sphlrd::CoefficientSeries& series,
                      const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "t";
  for (int c = 0; c < series.sieve.size; ++c) {
    const auto idx = sphlrd::harmonic_from_flat(c);
    out << ",c" << idx.degree << "_" << idx.order;
  }
  out << "\n";
  char buf[48];
  for (int t = 0; t < series.length(); ++t) {
    out << t;
    for (int c = 0; c < series.sieve.size; ++c) {
      std::snprintf(buf, sizeof(buf), ",%.10g", series.values(t, c));
      out << buf;
    }
    out << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_json(const nlohmann::json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << j.dump(2) << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

sphlrd::SpectralModel config_model(const sphlrd::ExperimentConfig& cfg,
                                   const sphlrd::SieveBasis& sieve) {
  sphlrd::SpectralModel model =
      cfg.example == 0 ? sphlrd::null_spharma11_model(sieve)
                       : sphlrd::alternative_model(cfg.example, sieve);
  if (cfg.innovation == "sobolev")
    model.innovation = sphlrd::sobolev_innovation(sieve);
  return model;
}

int run_simulate(const CommonArgs& args) {
  const auto cfg = load_config(args);
  cfg.validate();
  const auto sieve = cfg.sieve();
  const auto model = config_model(cfg, sieve);
  const auto series = sphlrd::simulate_series(
      model, cfg.T, cfg.burn_in, sphlrd::split_seed(cfg.seed, 1));
  write_series_csv(series, args.out_path);
  if (!cfg.quiet)
    std::cerr << "simulated T=" << cfg.T << " k=" << sieve.size << " -> "
              << args.out_path << "\n";
  return kExitOk;
}

int run_reconstruct(const CommonArgs& args) {
  const auto cfg = load_config(args);
  cfg.validate();
  const auto sieve = cfg.sieve();
  const auto model = config_model(cfg, sieve);
  const std::uint64_t rep_seed = sphlrd::split_seed(cfg.seed, 1);
  const auto series = sphlrd::simulate_series(model, cfg.T, cfg.burn_in,
                                              sphlrd::split_seed(rep_seed, 1));
  const int M = sphlrd::spatial_budget(cfg.T, cfg.gamma);
  const auto locations =
      sphlrd::sample_uniform_sphere(M, sphlrd::split_seed(rep_seed, 2));
  const auto obs = sphlrd::observe(series, locations, cfg.sigma2,
                                   sphlrd::split_seed(rep_seed, 3));
  const auto recon = sphlrd::reconstruct_series(obs, sieve);
  write_series_csv(recon, args.out_path);
  if (!cfg.quiet) {
    const double mse =
        (recon.values - series.values).squaredNorm() / recon.values.size();
    std::cerr << "reconstructed T=" << cfg.T << " M=" << M << " k="
              << sieve.size << ", per-coefficient MSE " << mse << " -> "
              << args.out_path << "\n";
  }
  return kExitOk;
}

int run_single_test(const CommonArgs& args) {
  const auto cfg = load_config(args);
  cfg.validate();
  const auto outcome = sphlrd::run_test_replicate(cfg, 0);
  write_json(sphlrd::to_json(outcome), args.out_path);
  if (!cfg.quiet) {
    std::cerr << "test decisions:";
    for (const auto& p : outcome.projections)
      std::cerr << " " << (p.reject ? "reject" : "keep");
    std::cerr << "\n";
  }
  return kExitOk;
}

int run_rates(const CommonArgs& args, bool size_study) {
  const auto cfg = load_config(args);
  const auto table = size_study ? sphlrd::run_size_experiment(cfg)
                                : sphlrd::run_power_experiment(cfg);
  sphlrd::emit_table(table, args.out_path);
  if (!args.json_path.empty())
    write_json(sphlrd::records_json(table), args.json_path);
  if (!cfg.quiet) sphlrd::emit_table(table, std::cout);
  return kExitOk;
}

int run_consistency(const CommonArgs& args) {
  auto cfg = load_config(args);
  if (cfg.T_grid.empty())
    throw std::invalid_argument(
        "consistency requires T_grid=<t1,t2,...> in the config");
  const auto table = sphlrd::run_consistency_experiment(cfg, cfg.T_grid);
  sphlrd::emit_table(table, args.out_path);
  if (!cfg.quiet) sphlrd::emit_table(table, std::cout);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral LRD test harness for discretely observed functional "
               "time series on the sphere"};
  app.require_subcommand(1);

  CommonArgs args;
  auto* simulate = app.add_subcommand(
      "simulate", "generate a coefficient series and write it as CSV");
  add_common(simulate, args, false);
  auto* reconstruct = app.add_subcommand(
      "reconstruct",
      "simulate, observe at random locations, reconstruct by series least "
      "squares, write coefficients as CSV");
  add_common(reconstruct, args, false);
  auto* test = app.add_subcommand(
      "test", "run one full pipeline replicate and write the test outcome as "
              "JSON");
  add_common(test, args, false);
  auto* size = app.add_subcommand("size", "empirical size table under H0");
  add_common(size, args, true);
  auto* power = app.add_subcommand("power",
                                   "empirical power table under an example "
                                   "alternative");
  add_common(power, args, true);
  auto* consistency = app.add_subcommand(
      "consistency", "median statistic norm over an increasing T grid");
  add_common(consistency, args, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (simulate->parsed()) return run_simulate(args);
    if (reconstruct->parsed()) return run_reconstruct(args);
    if (test->parsed()) return run_single_test(args);
    if (size->parsed()) return run_rates(args, true);
    if (power->parsed()) return run_rates(args, false);
    if (consistency->parsed()) return run_consistency(args);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::runtime_error& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitConfig;
}
