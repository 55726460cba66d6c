#pragma once

#include <vector>

namespace rutcast::data {

struct LoessConfig {
  double span = 0.05;  // fraction of the series in each local neighborhood
  int degree = 1;      // local polynomial degree, 0..2
};

// Locally weighted polynomial smoothing over index space: each point is fit
// from its ceil(span*n) nearest neighbors (clamped to at least 2) with
// tricube weights; no robustness iterations. Output has the input's length.
std::vector<double> loess_smooth(const std::vector<double>& y, const LoessConfig& cfg);
std::vector<double> loess_smooth(const std::vector<double>& y, double span);

}  // namespace rutcast::data
