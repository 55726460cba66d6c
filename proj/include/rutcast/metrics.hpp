#pragma once

#include <vector>

namespace rutcast::metrics {

double rmse(const std::vector<double>& predictions, const std::vector<double>& targets);
double mae(const std::vector<double>& predictions, const std::vector<double>& targets);
// Mean absolute percentage error, in percent; any zero target is an error.
double mape(const std::vector<double>& predictions, const std::vector<double>& targets);

struct MetricReport {
  double rmse = 0.0;
  double mae = 0.0;
  double mape = 0.0;  // percent
  std::size_t count = 0;
};

MetricReport compute_metrics(const std::vector<double>& predictions,
                             const std::vector<double>& targets);

struct UncertaintyReport {
  double mean_variance = 0.0;  // mm^2
  int trials = 0;
  int samples = 0;
};

// Mean per-sample variance of predictions across repeated trainings:
// (1/(M T)) sum_i sum_j (x_i^j - mu_i)^2 over trials-by-samples predictions.
UncertaintyReport uncertainty(const std::vector<std::vector<double>>& trials);

struct ClusterQuality {
  double silhouette = 0.0;         // in [-1, 1]; singleton points contribute 0
  double davies_bouldin = 0.0;     // lower is better
  double calinski_harabasz = 0.0;  // higher is better; +inf when within-scatter is 0
};

// Standard Euclidean-distance definitions over per-node feature vectors.
ClusterQuality cluster_quality(const std::vector<std::vector<double>>& points,
                               const std::vector<int>& assignment);

struct KsResult {
  double statistic = 0.0;
  double p_value = 0.0;
};

// One-sample Kolmogorov-Smirnov test of the residuals against a normal with
// the sample mean and (population) standard deviation. The p-value is the
// asymptotic approximation; with estimated parameters it is optimistic
// (Lilliefors caveat), matching common reporting practice.
KsResult ks_normality(const std::vector<double>& residuals);

// sup-distance between the empirical CDF of `values` and Normal(mean, sd).
double ks_statistic_against_normal(std::vector<double> values, double mean, double sd);

// Agreement between two labelings, chance-corrected; 1 for identical splits.
double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b);

}  // namespace rutcast::metrics
