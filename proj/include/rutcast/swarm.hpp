#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rutcast/data.hpp"
#include "rutcast/elm.hpp"
#include "rutcast/rng.hpp"

namespace rutcast::swarm {

enum class Variant { FixedWeight, LinearDecreasing, Iapso };

std::string variant_name(Variant v);
Variant variant_from_name(const std::string& name);

struct SwarmConfig {
  int iterations = 100;  // T: number of evaluated generations
  int population = 30;   // M
  double x_max = 1.0;
  double v_max = 1.0;
  double omega_max = 0.9;
  double omega_min = 0.4;
  double c1_max = 2.0;
  double c1_min = 0.8;
  double c2_max = 2.0;
  double c2_min = 0.8;
  Variant variant = Variant::Iapso;
  double mutation_prob = 0.05;  // uniform redraw; the gbest holder is exempt
  std::uint64_t seed = 1;
  bool parallel = true;  // OpenMP fitness/move loops; results identical either way

  void validate() const;
};

struct Particle {
  std::vector<double> position;
  std::vector<double> velocity;
  std::vector<double> best_position;
  double best_fitness = 0.0;
  double fitness = 0.0;   // current-generation value
  double omega = 0.0;     // parameters used for the most recent move
  double c1 = 0.0;
  double c2 = 0.0;
  double capacity = 0.0;  // E_i
  double rate = 0.0;      // R_i
};

struct SwarmState {
  std::vector<Particle> particles;
  std::vector<double> gbest_position;
  double gbest_fitness = 0.0;
  double lbest_fitness = 0.0;   // best raw fitness this generation
  double lworst_fitness = 0.0;  // worst raw fitness this generation
  double population_capacity = 0.0;  // normalized E_g
  int generation = 0;
  int gbest_holder = 0;
};

// Velocity and position update: v' = w v + c1 r (lbest - x) + c2 R (gbest - x),
// x' = x + v', with hard clamping to the boxes. r and R are scalar uniforms
// drawn fresh per particle per move.
void step_kinematics(Particle& p, const std::vector<double>& gbest, double omega, double c1,
                     double c2, double r, double R, double x_max, double v_max);
void step_kinematics(Particle& p, const std::vector<double>& gbest, double omega, double c1,
                     double c2, Rng& rng, double x_max, double v_max);

// E_i = (worst - f) / (worst - best), in [0, 1]; 1 when all fitnesses tie.
double particle_capacity(double fitness, double lworst, double lbest);

// Raw population capacity: previous-minus-current global best (>= 0 under
// minimization); 0 when there is no usable predecessor.
double population_capacity(double gbest_now, double gbest_prev);

// R = 1/sqrt((Eg + Ei)^2 + (1 - 2 Eg Ei)), algebraically 1/sqrt(Eg^2 + Ei^2 + 1).
double evolution_rate(double population_cap, double particle_cap);

// w = (1 - R) w_max + R w_min.
double adapt_inertia(double rate, double omega_max, double omega_min);

// c1 = c1_max - c1_min sin(R pi/2) t/T, c2 = c2_max + c2_min sin(R pi/2) t/T.
std::pair<double, double> adapt_learning(double rate, int t, const SwarmConfig& cfg);

double mse_fitness(const std::vector<double>& predictions, const std::vector<double>& targets);

using FitnessFn = std::function<double(const std::vector<double>&)>;
using Observer = std::function<void(const SwarmState&)>;

struct OptimizeResult {
  std::vector<double> best_position;
  double best_fitness = 0.0;
  std::vector<double> gbest_trace;  // one entry per evaluated generation
  std::vector<double> mean_trace;
};

// Runs `iterations` evaluated generations of `population` particles.
// Non-finite fitness values are treated as +infinity. Per-particle RNG
// streams keep runs bit-reproducible for a given seed under any worker count.
OptimizeResult optimize(const SwarmConfig& cfg, int dimension, const FitnessFn& fitness,
                        const Observer& observer = {});

// Particle encoding of RELM hidden parameters: the first L*n + L coordinates
// map to (W, b) of the original stage, the rest to the corrector, each scaled
// from [-x_max, x_max] to [-1, 1].
struct RelmShape {
  int hidden = 64;
  int inputs = data::kFeatureCount;
  double c_original = 100.0;
  double c_residual = 100.0;
  elm::Activation activation = elm::Activation::Sigmoid;
};

int relm_dimension(const RelmShape& shape);

struct RelmOptResult {
  elm::RelmModel model;
  double best_fitness = 0.0;  // training MSE of the returned model
  std::vector<double> gbest_trace;
  std::vector<double> mean_trace;
};

// Tunes both stages' hidden parameters against training MSE and returns the
// RELM decoded from the best position found.
RelmOptResult optimize_relm(const SwarmConfig& cfg, const data::SampleSet& train,
                            const RelmShape& shape);

// Matrices for (features, targets) of a sample set; used by the coupling and
// by evaluation code.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> to_matrices(const data::SampleSet& set);

}  // namespace rutcast::swarm
