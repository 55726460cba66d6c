#include "rutcast/swarm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "rutcast/util.hpp"

namespace rutcast::swarm {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
// Clerc-constriction constants for the fixed-weight baseline.
constexpr double kFixedOmega = 0.729;
constexpr double kFixedC = 1.49445;
}  // namespace

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::FixedWeight: return "fixed_weight";
    case Variant::LinearDecreasing: return "linear_decreasing";
    case Variant::Iapso: return "iapso";
  }
  throw ValidationError("unknown swarm variant");
}

Variant variant_from_name(const std::string& name) {
  if (name == "fixed_weight") return Variant::FixedWeight;
  if (name == "linear_decreasing") return Variant::LinearDecreasing;
  if (name == "iapso") return Variant::Iapso;
  throw ValidationError("unknown swarm variant: " + name);
}

void SwarmConfig::validate() const {
  if (iterations < 1 || population < 1)
    throw ValidationError("swarm: iterations and population must be >= 1");
  if (!(x_max > 0.0) || !(v_max > 0.0)) throw ValidationError("swarm: bounds must be > 0");
  if (!(omega_min < omega_max)) throw ValidationError("swarm: need omega_min < omega_max");
  if (c1_min > c1_max || c2_min > c2_max)
    throw ValidationError("swarm: learning-factor min exceeds max");
  if (mutation_prob < 0.0 || mutation_prob > 1.0)
    throw ValidationError("swarm: mutation_prob must be in [0,1]");
}

void step_kinematics(Particle& p, const std::vector<double>& gbest, double omega, double c1,
                     double c2, double r, double R, double x_max, double v_max) {
  const std::size_t d = p.position.size();
  if (gbest.size() != d || p.velocity.size() != d || p.best_position.size() != d)
    throw ValidationError("step_kinematics: dimension mismatch");
  for (std::size_t k = 0; k < d; ++k) {
    double v = omega * p.velocity[k] + c1 * r * (p.best_position[k] - p.position[k]) +
               c2 * R * (gbest[k] - p.position[k]);
    v = std::clamp(v, -v_max, v_max);
    double x = p.position[k] + v;
    x = std::clamp(x, -x_max, x_max);
    p.velocity[k] = v;
    p.position[k] = x;
  }
  p.omega = omega;
  p.c1 = c1;
  p.c2 = c2;
}

void step_kinematics(Particle& p, const std::vector<double>& gbest, double omega, double c1,
                     double c2, Rng& rng, double x_max, double v_max) {
  const double r = rng.uniform();
  const double R = rng.uniform();
  step_kinematics(p, gbest, omega, c1, c2, r, R, x_max, v_max);
}

double particle_capacity(double fitness, double lworst, double lbest) {
  if (lworst == lbest) return 1.0;  // all particles equal: uniformly "at best"
  if (!std::isfinite(lworst)) return std::isfinite(fitness) ? 1.0 : 0.0;
  return (lworst - fitness) / (lworst - lbest);
}

double population_capacity(double gbest_now, double gbest_prev) {
  if (!std::isfinite(gbest_prev)) return 0.0;
  return gbest_prev - gbest_now;
}

double evolution_rate(double population_cap, double particle_cap) {
  return 1.0 / std::sqrt(population_cap * population_cap + particle_cap * particle_cap + 1.0);
}

double adapt_inertia(double rate, double omega_max, double omega_min) {
  return (1.0 - rate) * omega_max + rate * omega_min;
}

std::pair<double, double> adapt_learning(double rate, int t, const SwarmConfig& cfg) {
  const double s = std::sin(rate * std::numbers::pi / 2.0) * double(t) / double(cfg.iterations);
  return {cfg.c1_max - cfg.c1_min * s, cfg.c2_max + cfg.c2_min * s};
}

double mse_fitness(const std::vector<double>& predictions, const std::vector<double>& targets) {
  if (predictions.size() != targets.size() || predictions.empty())
    throw ValidationError("mse_fitness: size mismatch or empty");
  double sum = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const double e = targets[i] - predictions[i];
    sum += e * e;
  }
  return sum / double(predictions.size());
}

OptimizeResult optimize(const SwarmConfig& cfg, int dimension, const FitnessFn& fitness,
                        const Observer& observer) {
  cfg.validate();
  if (dimension < 1) throw ValidationError("optimize: dimension must be >= 1");
  if (!fitness) throw ValidationError("optimize: missing fitness function");

  const int m = cfg.population;
  const int t_max = cfg.iterations;

  std::vector<Rng> streams;
  streams.reserve(std::size_t(m));
  for (int i = 0; i < m; ++i) streams.push_back(Rng::stream(cfg.seed, std::uint64_t(i)));

  std::vector<Particle> particles{std::size_t(m)};
  for (int i = 0; i < m; ++i) {
    Particle& p = particles[std::size_t(i)];
    Rng& rng = streams[std::size_t(i)];
    p.position.resize(std::size_t(dimension));
    p.velocity.resize(std::size_t(dimension));
    for (int d = 0; d < dimension; ++d) p.position[std::size_t(d)] = rng.uniform(-cfg.x_max, cfg.x_max);
    for (int d = 0; d < dimension; ++d) p.velocity[std::size_t(d)] = rng.uniform(-cfg.v_max, cfg.v_max);
    p.best_position = p.position;
    p.best_fitness = kInf;
  }

  OptimizeResult res;
  res.best_fitness = kInf;
  std::vector<double> gbest_pos;
  int gbest_holder = 0;

  for (int gen = 0; gen < t_max; ++gen) {
    // Fitness evaluations are independent; the reduction below stays serial
    // so results cannot depend on the worker count.
#pragma omp parallel for schedule(static) if (cfg.parallel)
    for (int i = 0; i < m; ++i) {
      Particle& p = particles[std::size_t(i)];
      const double f = fitness(p.position);
      p.fitness = std::isfinite(f) ? f : kInf;
    }

    const double gbest_prev = res.best_fitness;
    double lbest = kInf, lworst = -kInf;
    for (int i = 0; i < m; ++i) {
      Particle& p = particles[std::size_t(i)];
      if (p.fitness < p.best_fitness) {
        p.best_fitness = p.fitness;
        p.best_position = p.position;
      }
      lbest = std::min(lbest, p.fitness);
      lworst = std::max(lworst, p.fitness);
    }
    for (int i = 0; i < m; ++i) {
      const Particle& p = particles[std::size_t(i)];
      if (p.best_fitness < res.best_fitness) {
        res.best_fitness = p.best_fitness;
        gbest_pos = p.best_position;
        gbest_holder = i;
      }
    }

    const double eg_raw = population_capacity(res.best_fitness, gbest_prev);
    // Scale-free capacity; raw Eq.-15 units would depend on the fitness scale.
    const double eg = eg_raw / (1.0 + std::abs(gbest_prev));

    res.gbest_trace.push_back(res.best_fitness);
    double mean = 0.0;
    for (const auto& p : particles) mean += p.fitness;
    res.mean_trace.push_back(mean / double(m));

    const bool last = gen + 1 == t_max;

    if (!last || observer) {
      // Per-particle adaptive parameters from the just-evaluated generation.
      for (int i = 0; i < m; ++i) {
        Particle& p = particles[std::size_t(i)];
        switch (cfg.variant) {
          case Variant::Iapso: {
            p.capacity = particle_capacity(p.fitness, lworst, lbest);
            p.rate = evolution_rate(eg, p.capacity);
            p.omega = adapt_inertia(p.rate, cfg.omega_max, cfg.omega_min);
            const auto [c1, c2] = adapt_learning(p.rate, gen, cfg);
            p.c1 = c1;
            p.c2 = c2;
            break;
          }
          case Variant::FixedWeight:
            p.omega = kFixedOmega;
            p.c1 = p.c2 = kFixedC;
            break;
          case Variant::LinearDecreasing:
            p.omega = cfg.omega_max -
                      (cfg.omega_max - cfg.omega_min) * double(gen) / double(t_max);
            p.c1 = cfg.c1_max;
            p.c2 = cfg.c2_max;
            break;
        }
      }
    }

    if (observer) {
      SwarmState state;
      state.particles = particles;
      state.gbest_position = gbest_pos;
      state.gbest_fitness = res.best_fitness;
      state.lbest_fitness = lbest;
      state.lworst_fitness = lworst;
      state.population_capacity = eg;
      state.generation = gen;
      state.gbest_holder = gbest_holder;
      observer(state);
    }

    if (last) break;

#pragma omp parallel for schedule(static) if (cfg.parallel)
    for (int i = 0; i < m; ++i) {
      Particle& p = particles[std::size_t(i)];
      Rng& rng = streams[std::size_t(i)];
      // Mutation escape: redraw the position inside the box instead of the
      // kinematic move; the current gbest holder never mutates.
      if (rng.uniform() < cfg.mutation_prob && i != gbest_holder) {
        for (auto& x : p.position) x = rng.uniform(-cfg.x_max, cfg.x_max);
      } else {
        step_kinematics(p, gbest_pos, p.omega, p.c1, p.c2, rng, cfg.x_max, cfg.v_max);
      }
    }
  }

  res.best_position = std::move(gbest_pos);
  return res;
}

int relm_dimension(const RelmShape& shape) {
  if (shape.hidden < 1 || shape.inputs < 1)
    throw ValidationError("relm_dimension: hidden and inputs must be >= 1");
  return 2 * (shape.hidden * shape.inputs + shape.hidden);
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> to_matrices(const data::SampleSet& set) {
  if (set.samples.empty()) throw ValidationError("to_matrices: empty sample set");
  const int n = int(set.samples.size());
  const int d = int(set.samples.front().features.size());
  Eigen::MatrixXd x(n, d);
  Eigen::MatrixXd t(n, 1);
  for (int i = 0; i < n; ++i) {
    const auto& s = set.samples[std::size_t(i)];
    if (int(s.features.size()) != d) throw ValidationError("to_matrices: ragged features");
    for (int j = 0; j < d; ++j) x(i, j) = s.features[std::size_t(j)];
    t(i, 0) = s.target;
  }
  return {std::move(x), std::move(t)};
}

namespace {

elm::Params decode_stage(const std::vector<double>& pos, std::size_t offset,
                         const RelmShape& shape, double c, double x_max) {
  elm::Params p;
  p.weights.resize(shape.hidden, shape.inputs);
  p.bias.resize(shape.hidden);
  std::size_t k = offset;
  for (int i = 0; i < shape.hidden; ++i)
    for (int j = 0; j < shape.inputs; ++j) p.weights(i, j) = pos[k++] / x_max;
  for (int i = 0; i < shape.hidden; ++i) p.bias(i) = pos[k++] / x_max;
  p.regularization = c;
  p.activation = shape.activation;
  return p;
}

}  // namespace

RelmOptResult optimize_relm(const SwarmConfig& cfg, const data::SampleSet& train,
                            const RelmShape& shape) {
  if (train.samples.empty()) throw ValidationError("optimize_relm: empty training set");
  const auto [x, t] = to_matrices(train);
  if (int(x.cols()) != shape.inputs)
    throw ValidationError("optimize_relm: feature dimension " + std::to_string(x.cols()) +
                          " does not match shape.inputs " + std::to_string(shape.inputs));
  const int dim = relm_dimension(shape);
  const std::size_t stage = std::size_t(shape.hidden) * std::size_t(shape.inputs + 1);

  const auto train_from_position = [&](const std::vector<double>& pos) {
    const elm::Params original = decode_stage(pos, 0, shape, shape.c_original, cfg.x_max);
    const elm::Params corrector = decode_stage(pos, stage, shape, shape.c_residual, cfg.x_max);
    return elm::train_relm(original, corrector, x, t);
  };

  const FitnessFn fitness = [&](const std::vector<double>& pos) {
    const elm::RelmModel model = train_from_position(pos);
    return (model.predict(x) - t).squaredNorm() / double(t.rows());
  };

  const OptimizeResult opt = optimize(cfg, dim, fitness);

  RelmOptResult res;
  res.model = train_from_position(opt.best_position);
  res.best_fitness = opt.best_fitness;
  res.gbest_trace = opt.gbest_trace;
  res.mean_trace = opt.mean_trace;
  return res;
}

}  // namespace rutcast::swarm
