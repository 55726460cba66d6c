#include <cmath>
#include <limits>

#include "doctest.h"
#include "rutcast/rng.hpp"
#include "rutcast/swarm.hpp"
#include "rutcast/synth.hpp"
#include "rutcast/util.hpp"
#include "support/oracles.hpp"

using namespace rutcast;

namespace {

swarm::Particle make_particle(std::vector<double> x, std::vector<double> v,
                              std::vector<double> lbest) {
  swarm::Particle p;
  p.position = std::move(x);
  p.velocity = std::move(v);
  p.best_position = std::move(lbest);
  return p;
}

double sphere(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

data::SampleSet tiny_training_set() {
  const auto synth = data::synthesize_dataset({{3}, 30, 0.3, 0.05, 13});
  auto set = data::build_samples(synth.series.front(), 5);
  const auto z = data::Standardizer::fit(set);
  return z.transform(set);
}

}  // namespace

TEST_CASE("step_kinematics: a settled particle at both bests stays put") {
  auto p = make_particle({0.3, -0.2}, {0.0, 0.0}, {0.3, -0.2});
  step_kinematics(p, {0.3, -0.2}, 0.7, 2.0, 2.0, 0.5, 0.5, 1.0, 1.0);
  CHECK(p.position == std::vector<double>{0.3, -0.2});
  CHECK(p.velocity == std::vector<double>{0.0, 0.0});
}

TEST_CASE("step_kinematics: pure drift with unit inertia") {
  auto p = make_particle({0.0, 0.0}, {0.1, -0.05}, {0.0, 0.0});
  step_kinematics(p, {0.0, 0.0}, 1.0, 0.0, 0.0, 0.9, 0.9, 1.0, 1.0);
  CHECK(p.position[0] == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(p.position[1] == doctest::Approx(-0.05).epsilon(1e-15));
}

TEST_CASE("step_kinematics: scalar hand case with velocity clamping") {
  // v' = 0.5*0 + 2*0.5*(1-0) + 2*0.5*(1-0) = 2, clamped to v_max = 1; x' = 1.
  auto p = make_particle({0.0}, {0.0}, {1.0});
  step_kinematics(p, {1.0}, 0.5, 2.0, 2.0, 0.5, 0.5, 1.0, 1.0);
  CHECK(p.velocity[0] == 1.0);
  CHECK(p.position[0] == 1.0);
}

TEST_CASE("step_kinematics: position clamping to the box") {
  auto p = make_particle({0.9}, {0.8}, {0.9});
  step_kinematics(p, {0.9}, 1.0, 0.0, 0.0, 0.1, 0.1, 1.0, 1.0);
  CHECK(p.position[0] == 1.0);
  CHECK_THROWS_AS(step_kinematics(p, {0.1, 0.2}, 1.0, 0.0, 0.0, 0.1, 0.1, 1.0, 1.0),
                  ValidationError);
}

TEST_CASE("particle_capacity endpoints and midpoint") {
  CHECK(swarm::particle_capacity(0.0, 10.0, 0.0) == 1.0);   // best particle
  CHECK(swarm::particle_capacity(10.0, 10.0, 0.0) == 0.0);  // worst particle
  CHECK(swarm::particle_capacity(5.0, 10.0, 0.0) == 0.5);
  CHECK(swarm::particle_capacity(3.0, 3.0, 3.0) == 1.0);  // all equal
}

TEST_CASE("population_capacity sign convention and boundary") {
  CHECK(swarm::population_capacity(8.0, 10.0) == 2.0);
  CHECK(swarm::population_capacity(10.0, 10.0) == 0.0);
  CHECK(swarm::population_capacity(1.0, std::numeric_limits<double>::infinity()) == 0.0);
}

TEST_CASE("evolution_rate scalar cases and verbatim-form identity") {
  CHECK(swarm::evolution_rate(0.0, 0.0) == 1.0);
  CHECK(swarm::evolution_rate(0.0, 1.0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(swarm::evolution_rate(1.0, 1.0) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));

  Rng rng(3);
  for (int it = 0; it < 1000; ++it) {
    const double eg = rng.uniform(0.0, 3.0);
    const double ei = rng.uniform();
    const double r = swarm::evolution_rate(eg, ei);
    CHECK(std::abs(r - oracles::evolution_rate_verbatim(eg, ei)) <= 1e-12);
    CHECK(r > 0.0);
    CHECK(r <= 1.0);
  }
}

TEST_CASE("adapt_inertia endpoints") {
  CHECK(swarm::adapt_inertia(1.0, 0.9, 0.4) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(swarm::adapt_inertia(0.0, 0.9, 0.4) == doctest::Approx(0.9).epsilon(1e-15));
  CHECK(swarm::adapt_inertia(1.0 / std::sqrt(2.0), 0.9, 0.4) ==
        doctest::Approx(0.5464).epsilon(1e-4));
}

TEST_CASE("adapt_learning endpoints under the published parameters") {
  swarm::SwarmConfig cfg;  // defaults: c1 2/0.8, c2 2/0.8, T = 100
  {
    const auto [c1, c2] = swarm::adapt_learning(0.73, 0, cfg);
    CHECK(c1 == 2.0);
    CHECK(c2 == 2.0);
  }
  {
    const auto [c1, c2] = swarm::adapt_learning(1.0, cfg.iterations, cfg);
    CHECK(c1 == doctest::Approx(1.2).epsilon(1e-12));
    CHECK(c2 == doctest::Approx(2.8).epsilon(1e-12));
  }
  {
    const auto [c1, c2] = swarm::adapt_learning(0.0, cfg.iterations, cfg);
    CHECK(c1 == 2.0);
    CHECK(c2 == 2.0);
  }
}

TEST_CASE("mse_fitness scalar cases") {
  CHECK(swarm::mse_fitness({1.0, 2.0}, {1.0, 2.0}) == 0.0);
  CHECK(swarm::mse_fitness({1.0, 1.0}, {0.0, 0.0}) == 1.0);
  CHECK(swarm::mse_fitness({3.0, 5.0}, {1.0, 2.0}) == doctest::Approx(6.5).epsilon(1e-15));
  CHECK_THROWS_AS(swarm::mse_fitness({1.0}, {1.0, 2.0}), ValidationError);
}

TEST_CASE("optimize: single particle, single generation returns its initial draw") {
  swarm::SwarmConfig cfg;
  cfg.iterations = 1;
  cfg.population = 1;
  cfg.seed = 5;
  const auto res = swarm::optimize(cfg, 3, sphere);
  CHECK(res.gbest_trace.size() == 1);
  CHECK(res.best_fitness == doctest::Approx(sphere(res.best_position)).epsilon(1e-15));
}

TEST_CASE("optimize: identical seeds give identical traces; parallel equals serial") {
  swarm::SwarmConfig cfg;
  cfg.iterations = 30;
  cfg.population = 12;
  cfg.seed = 9;

  for (auto variant : {swarm::Variant::Iapso, swarm::Variant::FixedWeight,
                       swarm::Variant::LinearDecreasing}) {
    cfg.variant = variant;
    cfg.parallel = true;
    const auto a = swarm::optimize(cfg, 6, sphere);
    const auto b = swarm::optimize(cfg, 6, sphere);
    CHECK(a.gbest_trace == b.gbest_trace);
    CHECK(a.best_position == b.best_position);

    cfg.parallel = false;
    const auto serial = swarm::optimize(cfg, 6, sphere);
    CHECK(a.gbest_trace == serial.gbest_trace);
    CHECK(a.mean_trace == serial.mean_trace);
    CHECK(a.best_position == serial.best_position);
  }
}

TEST_CASE("optimize: gbest trace is non-increasing and states stay in bounds") {
  swarm::SwarmConfig cfg;
  cfg.iterations = 40;
  cfg.population = 15;
  cfg.seed = 3;
  int observed = 0;
  const auto observer = [&](const swarm::SwarmState& st) {
    ++observed;
    for (const auto& p : st.particles) {
      for (double x : p.position) CHECK(std::abs(x) <= cfg.x_max);
      for (double v : p.velocity) CHECK(std::abs(v) <= cfg.v_max);
      if (cfg.variant == swarm::Variant::Iapso && st.generation > 0) {
        CHECK(p.omega >= cfg.omega_min - 1e-15);
        CHECK(p.omega <= cfg.omega_max + 1e-15);
      }
    }
    CHECK(st.gbest_fitness <= st.lbest_fitness);
  };
  const auto res = swarm::optimize(cfg, 5, sphere, observer);
  CHECK(observed == cfg.iterations);
  REQUIRE(res.gbest_trace.size() == std::size_t(cfg.iterations));
  for (std::size_t g = 1; g < res.gbest_trace.size(); ++g)
    CHECK(res.gbest_trace[g] <= res.gbest_trace[g - 1]);
}

TEST_CASE("optimize: sphere with the published config converges below 1e-3") {
  swarm::SwarmConfig cfg;  // T=100, M=30, bounds 1, variant iapso
  cfg.seed = 17;
  const auto res = swarm::optimize(cfg, 5, sphere);
  CHECK(res.best_fitness <= 1e-3);
}

TEST_CASE("optimize: non-finite fitness values never become bests") {
  swarm::SwarmConfig cfg;
  cfg.iterations = 25;
  cfg.population = 10;
  cfg.seed = 21;
  const auto half_nan = [](const std::vector<double>& x) {
    if (x[0] < 0.0) return std::numeric_limits<double>::quiet_NaN();
    return sphere(x);
  };
  const auto res = swarm::optimize(cfg, 4, half_nan);
  CHECK(std::isfinite(res.best_fitness));
  CHECK(res.best_position[0] >= 0.0);
  for (double g : res.gbest_trace) CHECK(!std::isnan(g));
}

TEST_CASE("optimize validates its configuration") {
  swarm::SwarmConfig cfg;
  cfg.iterations = 0;
  CHECK_THROWS_AS(swarm::optimize(cfg, 3, sphere), ValidationError);
  cfg.iterations = 10;
  cfg.omega_min = 1.0;
  CHECK_THROWS_AS(swarm::optimize(cfg, 3, sphere), ValidationError);
  cfg.omega_min = 0.4;
  CHECK_THROWS_AS(swarm::optimize(cfg, 0, sphere), ValidationError);
}

TEST_CASE("relm_dimension arithmetic") {
  swarm::RelmShape shape;
  shape.hidden = 2;
  shape.inputs = 9;
  CHECK(swarm::relm_dimension(shape) == 40);
  shape.hidden = 0;
  CHECK_THROWS_AS(swarm::relm_dimension(shape), ValidationError);
}

TEST_CASE("optimize_relm: reported fitness matches the returned model exactly") {
  const auto train = tiny_training_set();
  swarm::SwarmConfig cfg;
  cfg.iterations = 10;
  cfg.population = 8;
  cfg.seed = 31;
  swarm::RelmShape shape;
  shape.hidden = 4;
  shape.inputs = int(train.feature_names.size());

  const auto res = swarm::optimize_relm(cfg, train, shape);
  const auto [x, t] = swarm::to_matrices(train);
  const double mse = (res.model.predict(x) - t).squaredNorm() / double(t.rows());
  CHECK(std::abs(mse - res.best_fitness) <= 1e-12);
  CHECK(res.gbest_trace.size() == std::size_t(cfg.iterations));
}

TEST_CASE("optimize_relm beats a single random-initialization RELM on most paired runs") {
  const auto train = tiny_training_set();
  const auto [x, t] = swarm::to_matrices(train);
  swarm::RelmShape shape;
  shape.hidden = 4;
  shape.inputs = int(train.feature_names.size());

  int wins = 0;
  const int runs = 100;
  for (int run = 0; run < runs; ++run) {
    swarm::SwarmConfig cfg;
    cfg.iterations = 10;
    cfg.population = 8;
    cfg.seed = 1000 + std::uint64_t(run);
    const auto opt = swarm::optimize_relm(cfg, train, shape);

    Rng rng = Rng::stream(2000, std::uint64_t(run));
    const auto o = elm::Params::random(shape.hidden, shape.inputs, shape.c_original,
                                       shape.activation, rng);
    const auto r = elm::Params::random(shape.hidden, shape.inputs, shape.c_residual,
                                       shape.activation, rng);
    const auto baseline = elm::train_relm(o, r, x, t);
    const double baseline_mse = (baseline.predict(x) - t).squaredNorm() / double(t.rows());
    if (opt.best_fitness <= baseline_mse) ++wins;
  }
  CHECK(wins >= 95);
}

TEST_CASE("swarm variant names round-trip") {
  for (auto v : {swarm::Variant::FixedWeight, swarm::Variant::LinearDecreasing,
                 swarm::Variant::Iapso})
    CHECK(swarm::variant_from_name(swarm::variant_name(v)) == v);
  CHECK_THROWS_AS(swarm::variant_from_name("bogus"), ValidationError);
}
