// Wall-clock comparison of the OpenMP kernels against their serial
// references, with an equality check so speed never drifts from correctness.

#include <chrono>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "rutcast/grey.hpp"
#include "rutcast/swarm.hpp"
#include "rutcast/synth.hpp"

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

bool matrices_equal(const rutcast::grey::SimilarityMatrix& a,
                    const rutcast::grey::SimilarityMatrix& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j)
      if (a.values[i][j] != b.values[i][j]) return false;
  return true;
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (built without OpenMP)\n");
#endif

  // Grey similarity kernel on a sized-up synthetic corpus.
  {
    rutcast::data::SynthSpec spec;
    spec.group_sizes = {60, 60, 60};
    spec.n_periods = 400;
    spec.seed = 7;
    const auto synth = rutcast::data::synthesize_dataset(spec);
    std::vector<std::vector<double>> series;
    std::vector<std::string> labels;
    for (const auto& rec : synth.series) {
      series.push_back(rec.depths());
      labels.push_back(rec.structure_id);
    }

    auto t0 = std::chrono::steady_clock::now();
    const auto serial = rutcast::grey::similarity_matrix_serial(series, labels);
    const double t_serial = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    const auto parallel = rutcast::grey::similarity_matrix(series, labels);
    const double t_parallel = seconds_since(t0);

    std::printf("grey similarity (%zu series x %d periods): serial %.3fs, parallel %.3fs, "
                "speedup %.2fx, equal: %s\n",
                series.size(), spec.n_periods, t_serial, t_parallel, t_serial / t_parallel,
                matrices_equal(serial, parallel) ? "yes" : "NO");
  }

  // Swarm fitness-evaluation loop on the RELM training objective.
  {
    rutcast::data::SynthSpec spec;
    spec.group_sizes = {4};
    spec.n_periods = 200;
    spec.seed = 7;
    const auto synth = rutcast::data::synthesize_dataset(spec);
    auto set = rutcast::data::build_samples(synth.series.front(), 5);
    const auto z = rutcast::data::Standardizer::fit(set);
    set = z.transform(set);

    rutcast::swarm::SwarmConfig cfg;
    cfg.iterations = 40;
    cfg.population = 30;
    cfg.seed = 11;
    rutcast::swarm::RelmShape shape;
    shape.hidden = 24;
    shape.inputs = int(set.feature_names.size());

    cfg.parallel = false;
    auto t0 = std::chrono::steady_clock::now();
    const auto serial = rutcast::swarm::optimize_relm(cfg, set, shape);
    const double t_serial = seconds_since(t0);

    cfg.parallel = true;
    t0 = std::chrono::steady_clock::now();
    const auto parallel = rutcast::swarm::optimize_relm(cfg, set, shape);
    const double t_parallel = seconds_since(t0);

    const bool equal = serial.gbest_trace == parallel.gbest_trace &&
                       serial.best_fitness == parallel.best_fitness;
    std::printf("swarm relm fitness (%d gens x %d particles, hidden %d): serial %.3fs, "
                "parallel %.3fs, speedup %.2fx, equal traces: %s\n",
                cfg.iterations, cfg.population, shape.hidden, t_serial, t_parallel,
                t_serial / t_parallel, equal ? "yes" : "NO");
  }
  return 0;
}
