#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rutcast/config.hpp"
#include "rutcast/louvain.hpp"
#include "rutcast/metrics.hpp"

namespace rutcast::pipeline {

struct Dataset {
  std::vector<data::SeriesRecord> series;    // raw measurements
  std::vector<data::SeriesRecord> smoothed;  // depths LOESS-smoothed, rest untouched
  std::vector<int> planted;                  // ground-truth groups; empty for CSV data
};

// Loads the CSV when configured, otherwise synthesizes; smooths depths.
Dataset load_dataset(const RunConfig& cfg);

// synth: write the dataset CSV plus a JSON sidecar (feature names, split
// spec, planted labels) into out_dir.
void cmd_synth(const RunConfig& cfg);

struct ClusterOutput {
  grey::SimilarityMatrix matrix;
  net::WeightedGraph graph;
  net::Partition partition;
  std::optional<metrics::ClusterQuality> quality;  // absent for a single community
  std::optional<double> ari;                       // vs planted labels, when known
};

ClusterOutput run_cluster(const RunConfig& cfg, const Dataset& ds);
// cluster: data -> grey -> graph -> Louvain; writes similarity.csv and
// partition.json into out_dir.
ClusterOutput cmd_cluster(const RunConfig& cfg);

net::Partition load_partition(const RunConfig& cfg);

enum class TrainMode { Single, All, Equivalent };
std::string mode_name(TrainMode m);
TrainMode mode_from_name(const std::string& name);

struct StructureResult {
  std::string structure_id;
  int community = -1;
  double train_mse = 0.0;  // best fitness reached by the optimizer
  metrics::MetricReport test;
};

struct TrainOutput {
  TrainMode mode = TrainMode::Equivalent;
  std::vector<StructureResult> per_structure;
  double avg_rmse = 0.0;
  double avg_mae = 0.0;
  double avg_mape = 0.0;
  std::optional<metrics::KsResult> residual_ks;  // pooled test residuals
};

// Per structure: train IAPSO-RELM on the mode's training pool, evaluate on
// that structure's chronological test split. `partition` is required for the
// equivalent mode.
TrainOutput run_train(const RunConfig& cfg, const Dataset& ds, TrainMode mode,
                      const net::Partition* partition, bool keep_models = false,
                      std::vector<std::pair<std::string, std::string>>* model_json = nullptr);

// train: writes metrics_<mode>.json, metrics_<mode>.txt and per-structure
// model JSON files into out_dir. Reads partition.json for mode=equivalent.
TrainOutput cmd_train(const RunConfig& cfg, TrainMode mode);

struct PsoBenchmarkCell {
  std::string function;
  std::string variant;
  std::vector<double> finals;  // per seed
  double median_final = 0.0;
};

struct PsoBenchmarkOutput {
  std::vector<PsoBenchmarkCell> cells;
  int seeds = 0;
};

PsoBenchmarkOutput run_benchmark_pso(const RunConfig& cfg, int n_seeds);
// benchmark-pso: variants on sphere/rastrigin/rosenbrock (D=10) and the
// RELM-training fitness; writes a table and per-generation traces.
PsoBenchmarkOutput cmd_benchmark_pso(const RunConfig& cfg, int n_seeds = 20);

struct UncertaintyOutput {
  // model name -> report, for the train and test splits
  std::map<std::string, metrics::UncertaintyReport> train;
  std::map<std::string, metrics::UncertaintyReport> test;
  std::string structure_id;
  int trials = 0;
};

UncertaintyOutput run_uncertainty(const RunConfig& cfg, const Dataset& ds, int trials);
// uncertainty: repeated trainings with distinct seeds for ELM, RELM and
// IAPSO-RELM; writes uncertainty.json.
UncertaintyOutput cmd_uncertainty(const RunConfig& cfg, int trials);

}  // namespace rutcast::pipeline
