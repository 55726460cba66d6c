// Command-line front end for the rutting-depth forecasting pipeline:
// synthesize data, cluster structures into equivalent training groups, train
// and evaluate the optimized residual-corrected ELM, benchmark the swarm
// variants, and measure prediction uncertainty.

#include <chrono>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rutcast/config.hpp"
#include "rutcast/pipeline.hpp"
#include "rutcast/util.hpp"

namespace {

using rutcast::RunConfig;

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "JSON run configuration");
  cmd->add_option("--set", args.overrides, "Override a config field, e.g. --set swarm.seed=7")
      ->take_all();
  cmd->add_option("--out", args.out_dir, "Output directory (overrides config out_dir)");
}

RunConfig resolve_config(const CommonArgs& args) {
  nlohmann::json j = rutcast::config_to_json(RunConfig{});
  if (!args.config_path.empty())
    j = rutcast::config_to_json(rutcast::load_config(args.config_path));
  for (const auto& kv : args.overrides) rutcast::apply_override(j, kv);
  RunConfig cfg = rutcast::config_from_json(j);
  if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
  return cfg;
}

class StageTimer {
 public:
  explicit StageTimer(std::string name)
      : name_(std::move(name)), start_(std::chrono::steady_clock::now()) {}
  ~StageTimer() {
    const auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_);
    std::fprintf(stderr, "[rutcast] %s finished in %.2fs\n", name_.c_str(), dt.count());
  }

 private:
  std::string name_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rutting-depth forecasting toolkit"};
  app.require_subcommand(1);

  CommonArgs synth_args, cluster_args, train_args, bench_args, unc_args;
  std::string train_mode = "equivalent";
  int bench_seeds = 20;
  int trials = 30;

  auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset with planted groups");
  add_common(synth, synth_args);

  auto* cluster =
      app.add_subcommand("cluster", "Grey similarity graph + Louvain community detection");
  add_common(cluster, cluster_args);

  auto* train = app.add_subcommand("train", "Train IAPSO-RELM per structure and report metrics");
  add_common(train, train_args);
  train->add_option("--mode", train_mode, "Training pool: single | all | equivalent")
      ->check(CLI::IsMember({"single", "all", "equivalent"}));

  auto* bench = app.add_subcommand("benchmark-pso", "Compare swarm variants on test functions");
  add_common(bench, bench_args);
  bench->add_option("--seeds", bench_seeds, "Number of seeded repetitions");

  auto* unc = app.add_subcommand("uncertainty", "Prediction variance across repeated trainings");
  add_common(unc, unc_args);
  unc->add_option("--trials", trials, "Number of retrainings (>= 2)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) {
      StageTimer t("synth");
      rutcast::pipeline::cmd_synth(resolve_config(synth_args));
    } else if (cluster->parsed()) {
      StageTimer t("cluster");
      rutcast::pipeline::cmd_cluster(resolve_config(cluster_args));
    } else if (train->parsed()) {
      StageTimer t("train");
      const auto out = rutcast::pipeline::cmd_train(resolve_config(train_args),
                                                    rutcast::pipeline::mode_from_name(train_mode));
      std::printf("average rmse=%.6f mae=%.6f mape=%.4f%%\n", out.avg_rmse, out.avg_mae,
                  out.avg_mape);
    } else if (bench->parsed()) {
      StageTimer t("benchmark-pso");
      const auto out = rutcast::pipeline::cmd_benchmark_pso(resolve_config(bench_args), bench_seeds);
      for (const auto& cell : out.cells)
        std::printf("%s %s median=%.8g\n", cell.function.c_str(), cell.variant.c_str(),
                    cell.median_final);
    } else if (unc->parsed()) {
      StageTimer t("uncertainty");
      const auto out = rutcast::pipeline::cmd_uncertainty(resolve_config(unc_args), trials);
      for (const auto& [name, rep] : out.test)
        std::printf("test %s mean_variance=%.8g\n", name.c_str(), rep.mean_variance);
    }
  } catch (const rutcast::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
