#include "rutcast/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "rutcast/rng.hpp"
#include "rutcast/util.hpp"

namespace rutcast::data {

namespace {

constexpr std::uint64_t kGlobalStream = 1;
constexpr std::uint64_t kGroupStreamBase = 1000;
constexpr std::uint64_t kStructStreamBase = 100000;
constexpr int kBumps = 1;  // sparse local deviations per structure

struct Template {
  double base_mm;        // depth offset
  double growth_mm;      // power-law amplitude at nominal full load
  double exponent;       // power-law exponent in relative load
  double seasonal_ratio; // seasonal amplitude relative to growth, signed
  double load_rate;      // axles per period
};

double jittered(double v, double jitter, Rng& rng) {
  return v * (1.0 + jitter * (2.0 * rng.uniform() - 1.0));
}

}  // namespace

SynthResult synthesize_dataset(const SynthSpec& spec) {
  const int n_groups = int(spec.group_sizes.size());
  if (n_groups < 1) throw ValidationError("synthesize_dataset: need at least one group");
  for (int s : spec.group_sizes)
    if (s < 1) throw ValidationError("synthesize_dataset: group sizes must be >= 1");
  if (spec.n_periods < 1) throw ValidationError("synthesize_dataset: n_periods must be >= 1");
  if (spec.noise_sd < 0 || spec.jitter < 0)
    throw ValidationError("synthesize_dataset: noise_sd and jitter must be >= 0");

  Rng global = Rng::stream(spec.seed, kGlobalStream);
  const double season_phase = 2.0 * std::numbers::pi * global.uniform();
  const double traffic_phase = 2.0 * std::numbers::pi * global.uniform();

  // Group templates differ in trend curvature and in the sign and size of the
  // seasonal response; members of one group are near-affine copies of the
  // shared shape, which grey relation treats as highly similar.
  std::vector<Template> templates;
  templates.reserve(std::size_t(n_groups));
  const double denom = n_groups > 1 ? double(n_groups - 1) : 1.0;
  for (int g = 0; g < n_groups; ++g) {
    Rng grng = Rng::stream(spec.seed, kGroupStreamBase + std::uint64_t(g));
    const double frac = double(g) / denom;
    Template t;
    t.base_mm = 6.0 + 4.0 * grng.uniform();
    t.growth_mm = 14.0 + 6.0 * grng.uniform();
    t.exponent = 0.40 + 0.60 * frac + 0.02 * (2.0 * grng.uniform() - 1.0);
    t.seasonal_ratio = (g % 2 == 0 ? 1.0 : -1.0) * (0.20 - 0.13 * frac) +
                       0.005 * (2.0 * grng.uniform() - 1.0);
    t.load_rate = 4.5e5 * (0.9 + 0.2 * grng.uniform());
    templates.push_back(t);
  }

  SynthResult out;
  int struct_index = 0;
  for (int g = 0; g < n_groups; ++g) {
    const Template& tpl = templates[std::size_t(g)];
    for (int s = 0; s < spec.group_sizes[std::size_t(g)]; ++s, ++struct_index) {
      Rng rng = Rng::stream(spec.seed, kStructStreamBase + std::uint64_t(struct_index));
      Template mine;
      mine.base_mm = jittered(tpl.base_mm, spec.jitter, rng);
      mine.growth_mm = jittered(tpl.growth_mm, spec.jitter, rng);
      // Curvature and seasonal-ratio jitter stay an order smaller than the
      // affine jitter: they change the shape, not just its scale.
      mine.exponent = jittered(tpl.exponent, 0.05 * spec.jitter, rng);
      mine.seasonal_ratio = jittered(tpl.seasonal_ratio, 0.05 * spec.jitter, rng);
      mine.load_rate = jittered(tpl.load_rate, spec.jitter, rng);
      const double nominal_full_load = mine.load_rate * double(spec.n_periods);

      // Sparse local deviations (campaign/distress artifacts) plus a little
      // white measurement noise. Deviations concentrate the within-group
      // difference profile instead of spreading it across every period.
      struct Bump {
        double center, width, amp;
      };
      std::vector<Bump> bumps;
      for (int b = 0; b < kBumps; ++b) {
        Bump bump;
        // Interior centers only: a deviation on the series extremes would
        // shift the min-max anchors the similarity normalization relies on.
        bump.center = rng.uniform(0.15 * spec.n_periods, 0.75 * spec.n_periods);
        bump.width = rng.uniform(1.5, 2.5);
        const double g = rng.gaussian();
        bump.amp = 3.0 * spec.noise_sd * (g < 0 ? -1.0 : 1.0) *
                   (0.5 + std::min(std::abs(g), 1.5));
        bumps.push_back(bump);
      }

      SeriesRecord rec;
      rec.structure_id = "STR" + std::to_string(struct_index + 1);
      rec.periods.reserve(std::size_t(spec.n_periods));
      double load = 0.0;
      for (int t = 0; t < spec.n_periods; ++t) {
        const double traffic_season =
            1.0 + 0.15 * std::sin(2.0 * std::numbers::pi * double(t) / 12.0 + traffic_phase);
        load += mine.load_rate * traffic_season;
        const double season =
            std::sin(2.0 * std::numbers::pi * double(t) / 12.0 + season_phase);
        const double temp = 15.0 + 9.0 * season + 0.6 * spec.noise_sd * rng.gaussian();
        const double temp_gain = mine.growth_mm * mine.seasonal_ratio / 9.0;
        double deviation = 0.3 * spec.noise_sd * rng.gaussian();
        for (const auto& b : bumps) {
          const double z = (double(t) - b.center) / b.width;
          deviation += b.amp * std::exp(-0.5 * z * z);
        }
        const double depth = mine.base_mm +
                             mine.growth_mm * std::pow(load / nominal_full_load, mine.exponent) +
                             temp_gain * (temp - 15.0) + deviation;
        Period p;
        p.index = t + 1;
        p.load_axes = load;
        p.temperature_c = temp;
        p.rut_depth_mm = depth;
        rec.periods.push_back(p);
      }
      out.series.push_back(std::move(rec));
      out.planted_group.push_back(g);
    }
  }
  return out;
}

SynthResult synthesize_dataset(int n_groups, int structures_per_group, int n_periods,
                               double noise_sd, std::uint64_t seed) {
  if (n_groups < 1 || structures_per_group < 1)
    throw ValidationError("synthesize_dataset: counts must be >= 1");
  SynthSpec spec;
  spec.group_sizes.assign(std::size_t(n_groups), structures_per_group);
  spec.n_periods = n_periods;
  spec.noise_sd = noise_sd;
  spec.seed = seed;
  return synthesize_dataset(spec);
}

}  // namespace rutcast::data
