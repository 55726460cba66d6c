#include "rutcast/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "rutcast/util.hpp"

namespace rutcast::metrics {

namespace {

void check_pair(const std::vector<double>& predictions, const std::vector<double>& targets) {
  if (predictions.size() != targets.size() || predictions.empty())
    throw ValidationError("metrics: prediction/target size mismatch or empty");
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

// Asymptotic Kolmogorov distribution tail with Stephens' finite-n correction.
double ks_p_value(double statistic, std::size_t n) {
  const double sn = std::sqrt(double(n));
  const double lambda = statistic * (sn + 0.12 + 0.11 / sn);
  double sum = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * double(j) * double(j) * lambda * lambda);
    sum += (j % 2 == 1 ? term : -term);
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace

double rmse(const std::vector<double>& predictions, const std::vector<double>& targets) {
  check_pair(predictions, targets);
  double sum = 0.0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const double e = targets[i] - predictions[i];
    sum += e * e;
  }
  return std::sqrt(sum / double(targets.size()));
}

double mae(const std::vector<double>& predictions, const std::vector<double>& targets) {
  check_pair(predictions, targets);
  double sum = 0.0;
  for (std::size_t i = 0; i < targets.size(); ++i) sum += std::abs(targets[i] - predictions[i]);
  return sum / double(targets.size());
}

double mape(const std::vector<double>& predictions, const std::vector<double>& targets) {
  check_pair(predictions, targets);
  double sum = 0.0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (targets[i] == 0.0)
      throw ValidationError("mape: zero target (skipping points would bias comparisons)");
    sum += std::abs((targets[i] - predictions[i]) / targets[i]);
  }
  return 100.0 * sum / double(targets.size());
}

MetricReport compute_metrics(const std::vector<double>& predictions,
                             const std::vector<double>& targets) {
  MetricReport r;
  r.rmse = rmse(predictions, targets);
  r.mae = mae(predictions, targets);
  r.mape = mape(predictions, targets);
  r.count = targets.size();
  return r;
}

UncertaintyReport uncertainty(const std::vector<std::vector<double>>& trials) {
  if (trials.size() < 2) throw ValidationError("uncertainty: need at least 2 trials");
  const std::size_t m = trials.front().size();
  if (m == 0) throw ValidationError("uncertainty: empty predictions");
  for (const auto& t : trials)
    if (t.size() != m) throw ValidationError("uncertainty: ragged trial matrix");

  const double t_count = double(trials.size());
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double mu = 0.0;
    for (const auto& t : trials) mu += t[i];
    mu /= t_count;
    for (const auto& t : trials) {
      const double d = t[i] - mu;
      total += d * d;
    }
  }
  UncertaintyReport r;
  r.mean_variance = total / (double(m) * t_count);
  r.trials = int(trials.size());
  r.samples = int(m);
  return r;
}

ClusterQuality cluster_quality(const std::vector<std::vector<double>>& points,
                               const std::vector<int>& assignment) {
  const std::size_t n = points.size();
  if (assignment.size() != n || n == 0)
    throw ValidationError("cluster_quality: assignment size mismatch");
  int k = 0;
  for (int c : assignment) {
    if (c < 0) throw ValidationError("cluster_quality: negative cluster id");
    k = std::max(k, c + 1);
  }
  std::vector<std::size_t> sizes(std::size_t(k), 0);
  for (int c : assignment) ++sizes[std::size_t(c)];
  if (k < 2) throw ValidationError("cluster_quality: need at least 2 clusters");
  for (std::size_t s : sizes)
    if (s == 0) throw ValidationError("cluster_quality: empty cluster");

  const std::size_t dim = points.front().size();
  for (const auto& p : points)
    if (p.size() != dim) throw ValidationError("cluster_quality: ragged points");

  const auto dist = [&](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      const double d = a[j] - b[j];
      s += d * d;
    }
    return std::sqrt(s);
  };

  // Silhouette.
  double sil_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const int own = assignment[i];
    if (sizes[std::size_t(own)] == 1) continue;  // convention: contributes 0
    std::vector<double> mean_dist(std::size_t(k), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      mean_dist[std::size_t(assignment[j])] += dist(points[i], points[j]);
    }
    const double a = mean_dist[std::size_t(own)] / double(sizes[std::size_t(own)] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (int c = 0; c < k; ++c) {
      if (c == own) continue;
      b = std::min(b, mean_dist[std::size_t(c)] / double(sizes[std::size_t(c)]));
    }
    const double denom = std::max(a, b);
    sil_sum += denom > 0.0 ? (b - a) / denom : 0.0;
  }

  // Centroids and scatters.
  std::vector<std::vector<double>> centroid(std::size_t(k), std::vector<double>(dim, 0.0));
  std::vector<double> grand(dim, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < dim; ++j) {
      centroid[std::size_t(assignment[i])][j] += points[i][j];
      grand[j] += points[i][j];
    }
  for (int c = 0; c < k; ++c)
    for (std::size_t j = 0; j < dim; ++j) centroid[std::size_t(c)][j] /= double(sizes[std::size_t(c)]);
  for (std::size_t j = 0; j < dim; ++j) grand[j] /= double(n);

  std::vector<double> scatter(std::size_t(k), 0.0);  // mean member-centroid distance
  double within = 0.0;                               // summed squared distances
  for (std::size_t i = 0; i < n; ++i) {
    const double d = dist(points[i], centroid[std::size_t(assignment[i])]);
    scatter[std::size_t(assignment[i])] += d;
    within += d * d;
  }
  for (int c = 0; c < k; ++c) scatter[std::size_t(c)] /= double(sizes[std::size_t(c)]);

  double dbi = 0.0;
  for (int a = 0; a < k; ++a) {
    double worst = 0.0;
    for (int b = 0; b < k; ++b) {
      if (a == b) continue;
      const double d = dist(centroid[std::size_t(a)], centroid[std::size_t(b)]);
      const double ratio = d > 0.0 ? (scatter[std::size_t(a)] + scatter[std::size_t(b)]) / d
                                   : std::numeric_limits<double>::infinity();
      worst = std::max(worst, ratio);
    }
    dbi += worst;
  }
  dbi /= double(k);

  double between = 0.0;
  for (int c = 0; c < k; ++c) {
    double d2 = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      const double d = centroid[std::size_t(c)][j] - grand[j];
      d2 += d * d;
    }
    between += double(sizes[std::size_t(c)]) * d2;
  }
  const double chi = (within > 0.0 && n > std::size_t(k))
                         ? (between / double(k - 1)) / (within / double(n - std::size_t(k)))
                         : std::numeric_limits<double>::infinity();

  ClusterQuality q;
  q.silhouette = sil_sum / double(n);
  q.davies_bouldin = dbi;
  q.calinski_harabasz = chi;
  return q;
}

double ks_statistic_against_normal(std::vector<double> values, double mean, double sd) {
  if (values.empty()) throw ValidationError("ks: empty sample");
  if (!(sd > 0.0)) throw NumericError("ks: zero or negative standard deviation");
  std::sort(values.begin(), values.end());
  const double n = double(values.size());
  double stat = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double cdf = normal_cdf((values[i] - mean) / sd);
    stat = std::max(stat, std::abs(double(i + 1) / n - cdf));
    stat = std::max(stat, std::abs(cdf - double(i) / n));
  }
  return stat;
}

KsResult ks_normality(const std::vector<double>& residuals) {
  if (residuals.size() < 8) throw ValidationError("ks_normality: need at least 8 residuals");
  const double n = double(residuals.size());
  double mean = 0.0;
  for (double v : residuals) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : residuals) var += (v - mean) * (v - mean);
  var /= n;
  if (!(var > 0.0)) throw NumericError("ks_normality: zero variance");
  KsResult r;
  r.statistic = ks_statistic_against_normal(residuals, mean, std::sqrt(var));
  r.p_value = ks_p_value(r.statistic, residuals.size());
  return r;
}

double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size() || a.empty())
    throw ValidationError("adjusted_rand_index: size mismatch or empty");
  std::map<std::pair<int, int>, double> cell;
  std::map<int, double> row, col;
  for (std::size_t i = 0; i < a.size(); ++i) {
    cell[{a[i], b[i]}] += 1.0;
    row[a[i]] += 1.0;
    col[b[i]] += 1.0;
  }
  const auto choose2 = [](double x) { return x * (x - 1.0) / 2.0; };
  double sum_cell = 0.0, sum_row = 0.0, sum_col = 0.0;
  for (const auto& [k, v] : cell) sum_cell += choose2(v);
  for (const auto& [k, v] : row) sum_row += choose2(v);
  for (const auto& [k, v] : col) sum_col += choose2(v);
  const double total = choose2(double(a.size()));
  const double expected = sum_row * sum_col / total;
  const double max_index = 0.5 * (sum_row + sum_col);
  if (max_index == expected) return 1.0;  // both labelings trivial
  return (sum_cell - expected) / (max_index - expected);
}

}  // namespace rutcast::metrics
