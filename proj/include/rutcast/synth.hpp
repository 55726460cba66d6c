#pragma once

#include <cstdint>
#include <vector>

#include "rutcast/data.hpp"

namespace rutcast::data {

// Synthetic benchmark generator. Each group shares a rutting template
// (power-law growth in accumulated load plus a seasonal temperature term);
// members jitter the template parameters and add Gaussian measurement noise.
// Deterministic function of the spec, including the seed.
struct SynthSpec {
  std::vector<int> group_sizes = {6, 7, 6};
  int n_periods = 90;
  double noise_sd = 0.3;  // mm of Gaussian noise on depth
  double jitter = 0.05;   // relative within-group parameter jitter
  std::uint64_t seed = 1;
};

struct SynthResult {
  std::vector<SeriesRecord> series;   // labeled STR1..STRn
  std::vector<int> planted_group;     // ground-truth group per series
};

SynthResult synthesize_dataset(const SynthSpec& spec);
SynthResult synthesize_dataset(int n_groups, int structures_per_group, int n_periods,
                               double noise_sd, std::uint64_t seed);

}  // namespace rutcast::data
