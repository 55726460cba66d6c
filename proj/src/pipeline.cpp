#include "rutcast/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "rutcast/loess.hpp"
#include "rutcast/rng.hpp"
#include "rutcast/util.hpp"

namespace rutcast::pipeline {

using nlohmann::json;

namespace {

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  return Rng::stream(base, a * 100003 + b).next_u64();
}

std::filesystem::path out_path(const RunConfig& cfg, const std::string& name) {
  return std::filesystem::path(cfg.out_dir) / name;
}

std::vector<double> column(const Eigen::MatrixXd& m) {
  return std::vector<double>(m.data(), m.data() + m.rows());
}

std::vector<double> targets_of(const data::SampleSet& set) {
  std::vector<double> t;
  t.reserve(set.samples.size());
  for (const auto& s : set.samples) t.push_back(s.target);
  return t;
}

}  // namespace

Dataset load_dataset(const RunConfig& cfg) {
  Dataset ds;
  if (!cfg.data_csv.empty()) {
    ds.series = data::load_series(cfg.data_csv);
  } else {
    auto synth = data::synthesize_dataset(cfg.synth);
    ds.series = std::move(synth.series);
    ds.planted = std::move(synth.planted_group);
  }
  ds.smoothed = ds.series;
  for (auto& rec : ds.smoothed)
    rec.set_depths(data::loess_smooth(rec.depths(), {cfg.loess_span, cfg.loess_degree}));
  return ds;
}

void cmd_synth(const RunConfig& cfg) {
  const auto synth = data::synthesize_dataset(cfg.synth);
  data::write_series_csv(out_path(cfg, "data.csv"), synth.series);

  json planted = json::object();
  for (std::size_t i = 0; i < synth.series.size(); ++i)
    planted[synth.series[i].structure_id] = synth.planted_group[i];
  json sidecar{{"feature_names", data::feature_names(cfg.window)},
               {"split", cfg.split.boundary_period
                             ? json{{"boundary_period", *cfg.split.boundary_period}}
                             : json{{"train_fraction", cfg.split.train_fraction}}},
               {"planted", planted},
               {"seed", cfg.synth.seed}};
  write_file_atomic(out_path(cfg, "synth_meta.json"), sidecar.dump(2) + "\n");
  std::fprintf(stderr, "[rutcast] synth: %zu series -> %s (seed %llu)\n", synth.series.size(),
               cfg.out_dir.c_str(), (unsigned long long)cfg.synth.seed);
}

ClusterOutput run_cluster(const RunConfig& cfg, const Dataset& ds) {
  if (ds.smoothed.size() < 2) throw ValidationError("cluster: need at least 2 series");
  std::vector<std::vector<double>> depth_series;
  std::vector<std::string> labels;
  depth_series.reserve(ds.smoothed.size());
  for (const auto& rec : ds.smoothed) {
    depth_series.push_back(rec.depths());
    labels.push_back(rec.structure_id);
  }

  ClusterOutput out;
  out.matrix = grey::similarity_matrix(depth_series, labels, {cfg.rho});
  out.graph = net::build_graph(out.matrix, cfg.edge);
  out.partition = net::louvain(out.graph, cfg.seed);

  if (out.partition.community_count() >= 2) {
    std::vector<std::vector<double>> features;
    features.reserve(depth_series.size());
    for (const auto& s : depth_series) features.push_back(grey::normalize(s));
    out.quality = metrics::cluster_quality(features, out.partition.assignment);
  }
  if (!ds.planted.empty())
    out.ari = metrics::adjusted_rand_index(ds.planted, out.partition.assignment);
  return out;
}

namespace {

json partition_to_json(const ClusterOutput& out) {
  json assignment = json::object();
  for (std::size_t i = 0; i < out.partition.labels.size(); ++i)
    assignment[out.partition.labels[i]] = out.partition.assignment[i];
  json communities = json::object();
  const auto groups = out.partition.communities();
  for (std::size_t c = 0; c < groups.size(); ++c)
    communities[std::to_string(c)] = groups[c];
  json j{{"modularity", out.partition.modularity},
         {"communities", communities},
         {"assignment", assignment}};
  if (out.quality)
    j["quality"] = {{"silhouette", out.quality->silhouette},
                    {"davies_bouldin", out.quality->davies_bouldin},
                    {"calinski_harabasz", out.quality->calinski_harabasz}};
  if (out.ari) j["ari_vs_planted"] = *out.ari;
  if (!out.graph.warnings.empty()) j["warnings"] = out.graph.warnings;
  return j;
}

}  // namespace

ClusterOutput cmd_cluster(const RunConfig& cfg) {
  const Dataset ds = load_dataset(cfg);
  ClusterOutput out = run_cluster(cfg, ds);
  write_file_atomic(out_path(cfg, "similarity.csv"), out.matrix.to_csv());
  write_file_atomic(out_path(cfg, "partition.json"), partition_to_json(out).dump(2) + "\n");
  for (const auto& w : out.graph.warnings) std::fprintf(stderr, "[rutcast] warning: %s\n", w.c_str());
  std::fprintf(stderr, "[rutcast] cluster: %d communities, Q=%.6f (seed %llu)\n",
               out.partition.community_count(), out.partition.modularity,
               (unsigned long long)cfg.seed);
  return out;
}

net::Partition load_partition(const RunConfig& cfg) {
  const json j = json::parse(read_file(out_path(cfg, "partition.json")));
  net::Partition p;
  for (const auto& [label, comm] : j.at("assignment").items()) {
    p.labels.push_back(label);
    p.assignment.push_back(comm.get<int>());
  }
  p.modularity = j.at("modularity").get<double>();
  return p;
}

std::string mode_name(TrainMode m) {
  switch (m) {
    case TrainMode::Single: return "single";
    case TrainMode::All: return "all";
    case TrainMode::Equivalent: return "equivalent";
  }
  throw ValidationError("unknown train mode");
}

TrainMode mode_from_name(const std::string& name) {
  if (name == "single") return TrainMode::Single;
  if (name == "all") return TrainMode::All;
  if (name == "equivalent") return TrainMode::Equivalent;
  throw ValidationError("unknown train mode: " + name);
}

TrainOutput run_train(const RunConfig& cfg, const Dataset& ds, TrainMode mode,
                      const net::Partition* partition, bool keep_models,
                      std::vector<std::pair<std::string, std::string>>* model_json) {
  const int n_structs = int(ds.smoothed.size());
  if (n_structs == 0) throw ValidationError("train: no series");
  if (mode == TrainMode::Equivalent && partition == nullptr)
    throw ValidationError("train: equivalent mode needs a partition (run cluster first)");

  std::vector<data::SampleSet> trains{std::size_t(n_structs)};
  std::vector<data::SampleSet> tests{std::size_t(n_structs)};
  for (int i = 0; i < n_structs; ++i) {
    const auto set = data::build_samples(ds.smoothed[std::size_t(i)], cfg.window);
    auto [train, test] = data::chronological_split(set, cfg.split);
    trains[std::size_t(i)] = std::move(train);
    tests[std::size_t(i)] = std::move(test);
  }

  // Training pools per structure. The same chronological cutoff applies to
  // every pooled structure, so no pool sees another structure's test window.
  std::map<std::string, int> community_of;
  std::map<int, data::SampleSet> merged;
  data::SampleSet all_pool;
  if (mode == TrainMode::All) {
    all_pool.structure_id = "all";
    all_pool.feature_names = trains.front().feature_names;
    for (const auto& t : trains)
      all_pool.samples.insert(all_pool.samples.end(), t.samples.begin(), t.samples.end());
  } else if (mode == TrainMode::Equivalent) {
    for (std::size_t i = 0; i < partition->labels.size(); ++i)
      community_of[partition->labels[i]] = partition->assignment[i];
    for (const auto& t : trains)
      if (!community_of.count(t.structure_id))
        throw ValidationError("train: structure " + t.structure_id + " missing from partition");
    merged = net::equivalent_training_set(*partition, trains);
  }

  TrainOutput out;
  out.mode = mode;
  out.per_structure.resize(std::size_t(n_structs));
  std::vector<std::string> model_texts{std::size_t(n_structs)};
  std::vector<std::vector<double>> residuals{std::size_t(n_structs)};
  const std::uint64_t mode_tag = std::uint64_t(mode) + 1;

#pragma omp parallel for schedule(dynamic) if (cfg.swarm.parallel)
  for (int i = 0; i < n_structs; ++i) {
    const data::SampleSet* pool = nullptr;
    int community = -1;
    switch (mode) {
      case TrainMode::Single: pool = &trains[std::size_t(i)]; break;
      case TrainMode::All: pool = &all_pool; break;
      case TrainMode::Equivalent: {
        community = community_of.at(trains[std::size_t(i)].structure_id);
        pool = &merged.at(community);
        break;
      }
    }

    const auto z = data::Standardizer::fit(*pool);
    const data::SampleSet pool_std = z.transform(*pool);
    const data::SampleSet test_std = z.transform(tests[std::size_t(i)]);

    swarm::SwarmConfig sc = cfg.swarm;
    sc.seed = derive_seed(cfg.swarm.seed, mode_tag, std::uint64_t(i));
    swarm::RelmShape shape;
    shape.hidden = cfg.elm_hidden;
    shape.inputs = int(pool_std.feature_names.size());
    shape.c_original = cfg.elm_c_original;
    shape.c_residual = cfg.elm_c_residual;
    shape.activation = elm::activation_from_name(cfg.elm_activation);

    const auto opt = swarm::optimize_relm(sc, pool_std, shape);
    const auto [x_test, t_test] = swarm::to_matrices(test_std);
    const auto predictions = column(opt.model.predict(x_test));

    const auto test_targets = targets_of(tests[std::size_t(i)]);
    auto& res = residuals[std::size_t(i)];
    res.resize(predictions.size());
    for (std::size_t k = 0; k < predictions.size(); ++k)
      res[k] = test_targets[k] - predictions[k];

    StructureResult& r = out.per_structure[std::size_t(i)];
    r.structure_id = trains[std::size_t(i)].structure_id;
    r.community = community;
    r.train_mse = opt.best_fitness;
    r.test = metrics::compute_metrics(predictions, test_targets);
    if (keep_models) model_texts[std::size_t(i)] = elm::to_json_string(opt.model);
  }

  double rmse_sum = 0.0, mae_sum = 0.0, mape_sum = 0.0;
  for (int i = 0; i < n_structs; ++i) {
    const auto& r = out.per_structure[std::size_t(i)];
    rmse_sum += r.test.rmse;
    mae_sum += r.test.mae;
    mape_sum += r.test.mape;
  }
  out.avg_rmse = rmse_sum / n_structs;
  out.avg_mae = mae_sum / n_structs;
  out.avg_mape = mape_sum / n_structs;

  std::vector<double> pooled;
  for (const auto& res : residuals) pooled.insert(pooled.end(), res.begin(), res.end());
  if (pooled.size() >= 8) {
    try {
      out.residual_ks = metrics::ks_normality(pooled);
    } catch (const NumericError&) {
      // zero-variance residuals: diagnostic omitted
    }
  }

  if (keep_models && model_json) {
    for (int i = 0; i < n_structs; ++i)
      model_json->push_back({out.per_structure[std::size_t(i)].structure_id,
                             std::move(model_texts[std::size_t(i)])});
  }
  return out;
}

namespace {

json train_output_to_json(const TrainOutput& out) {
  json per = json::array();
  for (const auto& r : out.per_structure)
    per.push_back({{"structure", r.structure_id},
                   {"community", r.community},
                   {"train_mse", r.train_mse},
                   {"rmse", r.test.rmse},
                   {"mae", r.test.mae},
                   {"mape_percent", r.test.mape},
                   {"count", r.test.count}});
  json j{{"mode", mode_name(out.mode)},
         {"average", {{"rmse", out.avg_rmse}, {"mae", out.avg_mae}, {"mape_percent", out.avg_mape}}},
         {"per_structure", per}};
  if (out.residual_ks)
    j["residual_ks"] = {{"statistic", out.residual_ks->statistic},
                        {"p_value", out.residual_ks->p_value}};
  return j;
}

std::string train_output_to_text(const TrainOutput& out) {
  std::ostringstream ss;
  char line[160];
  std::snprintf(line, sizeof(line), "mode: %s\n%-12s %4s %12s %12s %12s\n",
                mode_name(out.mode).c_str(), "structure", "comm", "RMSE", "MAE", "MAPE%");
  ss << line;
  for (const auto& r : out.per_structure) {
    std::snprintf(line, sizeof(line), "%-12s %4d %12.6f %12.6f %12.4f\n", r.structure_id.c_str(),
                  r.community, r.test.rmse, r.test.mae, r.test.mape);
    ss << line;
  }
  std::snprintf(line, sizeof(line), "%-12s %4s %12.6f %12.6f %12.4f\n", "average", "-", out.avg_rmse,
                out.avg_mae, out.avg_mape);
  ss << line;
  if (out.residual_ks) {
    std::snprintf(line, sizeof(line), "residual K-S: statistic %.5f, p %.4f\n",
                  out.residual_ks->statistic, out.residual_ks->p_value);
    ss << line;
  }
  return ss.str();
}

}  // namespace

TrainOutput cmd_train(const RunConfig& cfg, TrainMode mode) {
  const Dataset ds = load_dataset(cfg);
  net::Partition partition;
  const net::Partition* pp = nullptr;
  if (mode == TrainMode::Equivalent) {
    partition = load_partition(cfg);
    pp = &partition;
  }
  std::vector<std::pair<std::string, std::string>> models;
  TrainOutput out = run_train(cfg, ds, mode, pp, true, &models);

  const std::string mode_str = mode_name(mode);
  write_file_atomic(out_path(cfg, "metrics_" + mode_str + ".json"),
                    train_output_to_json(out).dump(2) + "\n");
  write_file_atomic(out_path(cfg, "metrics_" + mode_str + ".txt"), train_output_to_text(out));
  for (const auto& [id, text] : models)
    write_file_atomic(out_path(cfg, "model_" + mode_str + "_" + id + ".json"), text);
  std::fprintf(stderr, "[rutcast] train(%s): avg RMSE %.6f, MAE %.6f, MAPE %.4f%%\n",
               mode_str.c_str(), out.avg_rmse, out.avg_mae, out.avg_mape);
  return out;
}

namespace {

double sphere(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

double rastrigin(const std::vector<double>& x) {
  double s = 10.0 * double(x.size());
  for (double v : x) s += v * v - 10.0 * std::cos(2.0 * std::numbers::pi * v);
  return s;
}

double rosenbrock(const std::vector<double>& x) {
  double s = 0.0;
  for (std::size_t d = 0; d + 1 < x.size(); ++d) {
    const double a = x[d + 1] - x[d] * x[d];
    const double b = 1.0 - x[d];
    s += 100.0 * a * a + b * b;
  }
  return s;
}

std::string trace_to_csv(const swarm::OptimizeResult& r) {
  std::ostringstream ss;
  ss << "generation,gbest_fitness,mean_fitness\n";
  for (std::size_t g = 0; g < r.gbest_trace.size(); ++g)
    ss << g << ',' << format_double(r.gbest_trace[g]) << ',' << format_double(r.mean_trace[g])
       << '\n';
  return ss.str();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

PsoBenchmarkOutput run_benchmark_pso(const RunConfig& cfg, int n_seeds) {
  if (n_seeds < 1) throw ValidationError("benchmark-pso: need at least 1 seed");

  struct Fn {
    std::string name;
    swarm::FitnessFn fn;
    double box;
    int dim;
  };
  std::vector<Fn> functions = {{"sphere", sphere, 1.0, 10},
                               {"rastrigin", rastrigin, 5.12, 10},
                               {"rosenbrock", rosenbrock, 2.048, 10}};

  // RELM-training fitness on the first structure's training pool.
  const Dataset ds = load_dataset(cfg);
  const auto set = data::build_samples(ds.smoothed.front(), cfg.window);
  const auto [train, test] = data::chronological_split(set, cfg.split);
  (void)test;
  const auto z = data::Standardizer::fit(train);
  const data::SampleSet train_std = z.transform(train);
  const auto [x_train, t_train] = swarm::to_matrices(train_std);
  swarm::RelmShape shape;
  shape.hidden = cfg.elm_hidden;
  shape.inputs = int(train_std.feature_names.size());
  shape.c_original = cfg.elm_c_original;
  shape.c_residual = cfg.elm_c_residual;
  shape.activation = elm::activation_from_name(cfg.elm_activation);
  const Eigen::MatrixXd x_mat = x_train;
  const Eigen::MatrixXd t_mat = t_train;
  const double x_max = cfg.swarm.x_max;
  const int relm_dim = swarm::relm_dimension(shape);
  const swarm::FitnessFn relm_fitness = [&, x_max](const std::vector<double>& pos) {
    elm::Params original, corrector;
    original.weights.resize(shape.hidden, shape.inputs);
    original.bias.resize(shape.hidden);
    corrector.weights.resize(shape.hidden, shape.inputs);
    corrector.bias.resize(shape.hidden);
    std::size_t k = 0;
    for (int i = 0; i < shape.hidden; ++i)
      for (int j = 0; j < shape.inputs; ++j) original.weights(i, j) = pos[k++] / x_max;
    for (int i = 0; i < shape.hidden; ++i) original.bias(i) = pos[k++] / x_max;
    for (int i = 0; i < shape.hidden; ++i)
      for (int j = 0; j < shape.inputs; ++j) corrector.weights(i, j) = pos[k++] / x_max;
    for (int i = 0; i < shape.hidden; ++i) corrector.bias(i) = pos[k++] / x_max;
    original.regularization = shape.c_original;
    corrector.regularization = shape.c_residual;
    original.activation = corrector.activation = shape.activation;
    const auto model = elm::train_relm(original, corrector, x_mat, t_mat);
    return (model.predict(x_mat) - t_mat).squaredNorm() / double(t_mat.rows());
  };
  functions.push_back({"relm_training", relm_fitness, cfg.swarm.x_max, relm_dim});

  const std::vector<swarm::Variant> variants = {
      swarm::Variant::Iapso, swarm::Variant::FixedWeight, swarm::Variant::LinearDecreasing};

  PsoBenchmarkOutput out;
  out.seeds = n_seeds;
  for (std::size_t f = 0; f < functions.size(); ++f) {
    for (const auto variant : variants) {
      PsoBenchmarkCell cell;
      cell.function = functions[f].name;
      cell.variant = swarm::variant_name(variant);
      for (int s = 0; s < n_seeds; ++s) {
        swarm::SwarmConfig sc = cfg.swarm;
        sc.variant = variant;
        // Same seed across variants: identical initial particle distribution.
        sc.seed = derive_seed(cfg.swarm.seed, f, std::uint64_t(s));
        sc.x_max = functions[f].box;
        sc.v_max = functions[f].box * (cfg.swarm.v_max / cfg.swarm.x_max);
        const auto res = swarm::optimize(sc, functions[f].dim, functions[f].fn);
        cell.finals.push_back(res.best_fitness);
        if (s == 0)
          write_file_atomic(out_path(cfg, "trace_" + cell.function + "_" + cell.variant + ".csv"),
                            trace_to_csv(res));
      }
      cell.median_final = median(cell.finals);
      out.cells.push_back(std::move(cell));
    }
  }
  return out;
}

PsoBenchmarkOutput cmd_benchmark_pso(const RunConfig& cfg, int n_seeds) {
  PsoBenchmarkOutput out = run_benchmark_pso(cfg, n_seeds);
  json rows = json::array();
  std::ostringstream text;
  char line[160];
  std::snprintf(line, sizeof(line), "%-14s %-18s %16s  (%d seeds)\n", "function", "variant",
                "median final", out.seeds);
  text << line;
  for (const auto& cell : out.cells) {
    rows.push_back({{"function", cell.function},
                    {"variant", cell.variant},
                    {"median_final", cell.median_final},
                    {"finals", cell.finals}});
    std::snprintf(line, sizeof(line), "%-14s %-18s %16.8g\n", cell.function.c_str(),
                  cell.variant.c_str(), cell.median_final);
    text << line;
  }
  write_file_atomic(out_path(cfg, "pso_benchmark.json"),
                    json{{"seeds", out.seeds}, {"rows", rows}}.dump(2) + "\n");
  write_file_atomic(out_path(cfg, "pso_benchmark.txt"), text.str());
  std::fprintf(stderr, "[rutcast] benchmark-pso: %zu cells, %d seeds\n", out.cells.size(),
               out.seeds);
  return out;
}

UncertaintyOutput run_uncertainty(const RunConfig& cfg, const Dataset& ds, int trials) {
  if (trials < 2) throw ValidationError("uncertainty: need at least 2 trials");
  const auto it = std::find_if(ds.smoothed.begin(), ds.smoothed.end(), [&](const auto& rec) {
    return rec.structure_id == cfg.uncertainty_structure;
  });
  if (it == ds.smoothed.end())
    throw ValidationError("uncertainty: structure " + cfg.uncertainty_structure + " not found");

  const auto set = data::build_samples(*it, cfg.window);
  auto [train, test] = data::chronological_split(set, cfg.split);
  const auto z = data::Standardizer::fit(train);
  const data::SampleSet train_std = z.transform(train);
  const data::SampleSet test_std = z.transform(test);
  const auto [x_train, t_train] = swarm::to_matrices(train_std);
  const auto [x_test, t_test] = swarm::to_matrices(test_std);

  const int n_inputs = int(train_std.feature_names.size());
  const auto activation = elm::activation_from_name(cfg.elm_activation);

  std::map<std::string, std::vector<std::vector<double>>> train_preds, test_preds;
  for (int trial = 0; trial < trials; ++trial) {
    {
      Rng rng = Rng::stream(cfg.seed, 60000 + std::uint64_t(trial));
      const auto params =
          elm::Params::random(cfg.elm_hidden, n_inputs, cfg.elm_c_original, activation, rng);
      const auto model = elm::train_elm(params, x_train, t_train);
      train_preds["elm"].push_back(column(model.predict(x_train)));
      test_preds["elm"].push_back(column(model.predict(x_test)));
    }
    {
      Rng rng_o = Rng::stream(cfg.seed, 70000 + std::uint64_t(trial));
      Rng rng_r = Rng::stream(cfg.seed, 80000 + std::uint64_t(trial));
      const auto original =
          elm::Params::random(cfg.elm_hidden, n_inputs, cfg.elm_c_original, activation, rng_o);
      const auto corrector =
          elm::Params::random(cfg.elm_hidden, n_inputs, cfg.elm_c_residual, activation, rng_r);
      const auto model = elm::train_relm(original, corrector, x_train, t_train);
      train_preds["relm"].push_back(column(model.predict(x_train)));
      test_preds["relm"].push_back(column(model.predict(x_test)));
    }
    {
      swarm::SwarmConfig sc = cfg.swarm;
      sc.seed = derive_seed(cfg.seed, 9, std::uint64_t(trial));
      swarm::RelmShape shape{cfg.elm_hidden, n_inputs, cfg.elm_c_original, cfg.elm_c_residual,
                             activation};
      const auto opt = swarm::optimize_relm(sc, train_std, shape);
      train_preds["iapso_relm"].push_back(column(opt.model.predict(x_train)));
      test_preds["iapso_relm"].push_back(column(opt.model.predict(x_test)));
    }
  }

  UncertaintyOutput out;
  out.structure_id = cfg.uncertainty_structure;
  out.trials = trials;
  for (const auto& [name, preds] : train_preds) out.train[name] = metrics::uncertainty(preds);
  for (const auto& [name, preds] : test_preds) out.test[name] = metrics::uncertainty(preds);
  return out;
}

UncertaintyOutput cmd_uncertainty(const RunConfig& cfg, int trials) {
  const Dataset ds = load_dataset(cfg);
  UncertaintyOutput out = run_uncertainty(cfg, ds, trials);
  json j{{"structure", out.structure_id}, {"trials", out.trials}};
  for (const auto& [name, rep] : out.train)
    j["train"][name] = {{"mean_variance", rep.mean_variance}, {"samples", rep.samples}};
  for (const auto& [name, rep] : out.test)
    j["test"][name] = {{"mean_variance", rep.mean_variance}, {"samples", rep.samples}};
  write_file_atomic(out_path(cfg, "uncertainty.json"), j.dump(2) + "\n");
  std::fprintf(stderr, "[rutcast] uncertainty: structure %s, %d trials\n",
               out.structure_id.c_str(), trials);
  return out;
}

}  // namespace rutcast::pipeline
