// Independent reference implementations used as oracles. These deliberately
// avoid the library's code paths: plain loops, direct formula transcription,
// exhaustive enumeration.
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "rutcast/graph.hpp"

namespace oracles {

// Grey relation degree, straight transcription: per-series min-max rescale,
// pointwise coefficients, mean.
inline double grey_relation_degree(const std::vector<double>& a, const std::vector<double>& b,
                                   double rho) {
  const auto rescale = [](const std::vector<double>& x) {
    double lo = x[0], hi = x[0];
    for (double v : x) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    std::vector<double> out(x.size(), 0.0);
    if (hi > lo)
      for (std::size_t k = 0; k < x.size(); ++k) out[k] = (x[k] - lo) / (hi - lo);
    return out;
  };
  const auto xa = rescale(a);
  const auto xb = rescale(b);
  double dmin = std::abs(xa[0] - xb[0]);
  double dmax = dmin;
  for (std::size_t k = 1; k < xa.size(); ++k) {
    const double d = std::abs(xa[k] - xb[k]);
    dmin = std::min(dmin, d);
    dmax = std::max(dmax, d);
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < xa.size(); ++k) {
    const double d = std::abs(xa[k] - xb[k]);
    sum += dmax == 0.0 ? 1.0 : (dmin + rho * dmax) / (d + rho * dmax);
  }
  return sum / double(xa.size());
}

// Modularity as a literal double sum over ordered same-community pairs.
inline double modularity_pair_sum(const std::vector<std::vector<double>>& adjacency,
                                  const std::vector<int>& communities) {
  const std::size_t n = adjacency.size();
  double two_m = 0.0;
  std::vector<double> degree(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      degree[i] += adjacency[i][j];
      two_m += adjacency[i][j];
    }
  if (two_m == 0.0) return 0.0;
  double q = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (communities[i] == communities[j])
        q += adjacency[i][j] - degree[i] * degree[j] / two_m;
  return q / two_m;
}

// Visits every set partition of {0..n-1} as a restricted growth string.
inline void for_each_partition(int n, const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> labels(std::size_t(n), 0);
  std::vector<int> max_before(std::size_t(n), 0);  // max label among elements < i
  int i = 0;
  while (true) {
    if (i == n) {
      visit(labels);
      --i;
      while (i > 0 && labels[std::size_t(i)] == max_before[std::size_t(i)] + 1) --i;
      if (i == 0) return;
      ++labels[std::size_t(i)];
      ++i;
      continue;
    }
    if (i > 0) {
      max_before[std::size_t(i)] =
          std::max(max_before[std::size_t(i - 1)], labels[std::size_t(i - 1)]);
      labels[std::size_t(i)] = 0;
    }
    ++i;
  }
}

// Best modularity over all partitions (feasible for n <= 10).
inline double exhaustive_max_modularity(const rutcast::net::WeightedGraph& g,
                                        std::vector<int>* best_assignment = nullptr) {
  double best = -2.0;
  for_each_partition(int(g.size()), [&](const std::vector<int>& labels) {
    const double q = modularity_pair_sum(g.adjacency, labels);
    if (q > best) {
      best = q;
      if (best_assignment) *best_assignment = labels;
    }
  });
  return best;
}

// LOESS recomputed through a weighted Vandermonde least-squares solve (QR),
// independent of the library's accumulated normal equations.
inline std::vector<double> loess_reference(const std::vector<double>& y, double span, int degree) {
  const int n = int(y.size());
  const int q = std::clamp(int(std::ceil(span * n)), 2, n);
  std::vector<double> out(y.size());
  for (int i = 0; i < n; ++i) {
    // q nearest by |j - i|, ties toward the smaller index
    std::vector<int> idx(std::size_t(n), 0);
    for (int j = 0; j < n; ++j) idx[std::size_t(j)] = j;
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
      return std::abs(a - i) != std::abs(b - i) ? std::abs(a - i) < std::abs(b - i) : a < b;
    });
    idx.resize(std::size_t(q));
    double h = 0.0;
    for (int j : idx) h = std::max(h, double(std::abs(j - i)));

    std::vector<int> used;
    std::vector<double> w;
    for (int j : idx) {
      const double u = h > 0.0 ? std::abs(j - i) / h : 0.0;
      const double t = 1.0 - u * u * u;
      const double weight = t * t * t;
      if (weight > 0.0) {
        used.push_back(j);
        w.push_back(weight);
      }
    }
    int lo = used[0], hi = used[0];
    for (int j : used) {
      lo = std::min(lo, j);
      hi = std::max(hi, j);
    }
    const int deg = (int(used.size()) > degree && hi > lo) ? degree : 0;
    Eigen::MatrixXd design(int(used.size()), deg + 1);
    Eigen::VectorXd rhs(int(used.size()));
    for (std::size_t r = 0; r < used.size(); ++r) {
      const double sw = std::sqrt(w[r]);
      double p = 1.0;
      for (int c = 0; c <= deg; ++c) {
        design(int(r), c) = sw * p;
        p *= double(used[r] - i);
      }
      rhs(int(r)) = sw * y[std::size_t(used[r])];
    }
    const Eigen::VectorXd coef = design.colPivHouseholderQr().solve(rhs);
    out[std::size_t(i)] = coef(0);
  }
  return out;
}

// Verbatim form of the evolution-rate denominator.
inline double evolution_rate_verbatim(double eg, double ei) {
  return 1.0 / std::sqrt((eg + ei) * (eg + ei) + (1.0 - 2.0 * eg * ei));
}

}  // namespace oracles
