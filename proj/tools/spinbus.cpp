// spinbus: run an experiment or the acceptance suite.
//
//   spinbus --experiment fig2 --out out/fig2
//   spinbus --config run.json --force
//   spinbus verify [--max-n 10] [--out dir]
//
// Exit codes: 0 ok, 1 other failure, 2 bad config (or output exists without
// --force), 3 capacity, 4 convergence. verify exits 1 if any check fails.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "spinbus/experiment.hpp"

namespace {

enum Exit { ok = 0, failure = 1, config = 2, capacity = 3, convergence = 4 };

template <class F>
int guarded(F&& f) {
  try {
    return f();
  } catch (const spinbus::CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return capacity;
  } catch (const spinbus::ConvergenceError& e) {
    std::cerr << "convergence error: " << e.what() << " (best residual " << e.best_residual() << ")\n";
    return convergence;
  } catch (const spinbus::InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return config;
  } catch (const spinbus::OutputExists& e) {
    std::cerr << "error: " << e.what() << "\n";
    return config;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return failure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heisenberg-chain qubit bus: exact diagonalization experiments"};
  app.set_version_flag("--version", "spinbus 1.0");

  std::optional<std::string> experiment, config_path, out;
  std::optional<int> threads, lambda_steps;
  std::optional<std::uint64_t> seed;
  std::optional<double> lambda_min, lambda_max, jq;
  bool force = false;

  app.add_option("--experiment", experiment, "fig2 | fig3 | fig4 | fig5 | parity_levels | scaling | custom");
  app.add_option("--config", config_path, "JSON config; flags override its values");
  app.add_option("--out", out, "output directory");
  app.add_option("--threads", threads, "worker threads for sparse products (1 = bit reproducible)");
  app.add_option("--seed", seed, "Lanczos start-vector seed");
  app.add_option("--lambda-min", lambda_min);
  app.add_option("--lambda-max", lambda_max);
  app.add_option("--lambda-steps", lambda_steps);
  app.add_option("--jq", jq, "bare qubit-chain coupling");
  app.add_flag("--force", force, "overwrite existing output files");

  auto* verify = app.add_subcommand("verify", "run the acceptance suite");
  int max_n = spinbus::kMaxSites;
  std::optional<std::string> verify_out;
  verify->add_option("--max-n", max_n, "skip checks that need chains longer than this");
  verify->add_option("--out", verify_out, "also write summary.json here");
  verify->add_flag("--force", force, "overwrite an existing summary.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : config;
  }

  if (*verify) {
    return guarded([&] {
      spinbus::AcceptanceOptions opt;
      opt.max_n = max_n;
      if (seed) opt.solver.seed = *seed;
      if (threads) opt.solver.threads = *threads;
      if (verify_out) spinbus::check_writable(*verify_out, {"summary.json"}, force);
      const auto results = spinbus::run_acceptance(opt, [](const spinbus::CriterionResult& r) {
        std::cout << spinbus::format_line(r) << std::endl;
      });
      int fails = 0, skips = 0;
      for (const auto& r : results) {
        fails += r.status == spinbus::Status::fail;
        skips += r.status == spinbus::Status::skipped;
      }
      std::cout << results.size() - fails - skips << " passed, " << fails << " failed, " << skips << " skipped\n";
      if (verify_out) {
        std::filesystem::create_directories(*verify_out);
        spinbus::write_file(std::filesystem::path(*verify_out) / "summary.json",
                            spinbus::summary_json(results).dump(2) + "\n");
      }
      return fails == 0 ? ok : failure;
    });
  }

  return guarded([&] {
    spinbus::ExperimentConfig cfg;
    if (config_path) cfg = spinbus::load_config(*config_path);
    if (experiment) cfg.experiment = *experiment;
    if (out) cfg.out = *out;
    if (threads) cfg.threads = *threads;
    if (seed) cfg.seed = *seed;
    if (lambda_min) cfg.lambda_min = *lambda_min;
    if (lambda_max) cfg.lambda_max = *lambda_max;
    if (lambda_steps) cfg.lambda_steps = *lambda_steps;
    if (jq) cfg.jq = *jq;
    if (cfg.experiment.empty()) throw spinbus::ConfigError("no experiment given (--experiment or config \"experiment\")");

    const auto checks = spinbus::run_experiment(cfg, force);
    std::cout << "wrote " << cfg.experiment << " to " << cfg.out << "\n";
    for (const auto& c : checks) std::cout << spinbus::format_line(c) << "\n";
    return ok;
  });
}
