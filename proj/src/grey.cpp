#include "rutcast/grey.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rutcast/util.hpp"

namespace rutcast::grey {

namespace {

void check_rho(double rho) {
  if (!(rho >= 0.1 && rho <= 1.0))
    throw ValidationError("grey: rho must be in [0.1, 1.0]");
}

void validate_series(const std::vector<std::vector<double>>& series,
                     const std::vector<std::string>& labels) {
  if (series.size() < 2) throw ValidationError("similarity_matrix: need at least 2 series");
  if (labels.size() != series.size())
    throw ValidationError("similarity_matrix: label count mismatch");
  const std::size_t len = series.front().size();
  for (const auto& s : series)
    if (s.size() != len) throw ValidationError("similarity_matrix: series lengths differ");
}

}  // namespace

std::vector<double> normalize(const std::vector<double>& series) {
  if (series.size() < 2) throw ValidationError("grey::normalize: need at least 2 points");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (double v : series) {
    if (!std::isfinite(v)) throw ValidationError("grey::normalize: non-finite value");
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  std::vector<double> out(series.size());
  const double range = hi - lo;
  if (range == 0.0) return out;  // flat series: all zeros
  for (std::size_t k = 0; k < series.size(); ++k) out[k] = (series[k] - lo) / range;
  return out;
}

std::vector<double> relation_coefficients(const std::vector<double>& ref,
                                          const std::vector<double>& cmp, double rho) {
  check_rho(rho);
  if (ref.size() != cmp.size())
    throw ValidationError("grey::relation_coefficients: length mismatch");
  const std::size_t n = ref.size();
  std::vector<double> delta(n);
  double dmin = std::numeric_limits<double>::infinity();
  double dmax = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    delta[k] = std::abs(ref[k] - cmp[k]);
    dmin = std::min(dmin, delta[k]);
    dmax = std::max(dmax, delta[k]);
  }
  std::vector<double> r(n);
  if (dmax == 0.0) {
    std::fill(r.begin(), r.end(), 1.0);  // identical sequences
    return r;
  }
  for (std::size_t k = 0; k < n; ++k)
    r[k] = (dmin + rho * dmax) / (delta[k] + rho * dmax);
  return r;
}

double relation_degree(const std::vector<double>& ref, const std::vector<double>& cmp,
                       const GreyConfig& cfg) {
  if (ref.size() != cmp.size()) throw ValidationError("grey::relation_degree: length mismatch");
  const auto r = relation_coefficients(normalize(ref), normalize(cmp), cfg.rho);
  double sum = 0.0;
  for (double v : r) sum += v;
  return sum / double(r.size());
}

SimilarityMatrix similarity_matrix(const std::vector<std::vector<double>>& series,
                                   const std::vector<std::string>& labels,
                                   const GreyConfig& cfg) {
  validate_series(series, labels);
  check_rho(cfg.rho);
  const int n = int(series.size());

  std::vector<std::vector<double>> normed(series.size());
  for (int i = 0; i < n; ++i) normed[std::size_t(i)] = normalize(series[std::size_t(i)]);

  SimilarityMatrix m;
  m.labels = labels;
  m.values.assign(std::size_t(n), std::vector<double>(std::size_t(n), 1.0));

  // Entry (i, j) depends only on series i and j, so rows of the upper
  // triangle are embarrassingly parallel and the result is bitwise identical
  // to the serial reference.
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const auto r =
          relation_coefficients(normed[std::size_t(i)], normed[std::size_t(j)], cfg.rho);
      double sum = 0.0;
      for (double v : r) sum += v;
      const double degree = sum / double(r.size());
      m.values[std::size_t(i)][std::size_t(j)] = degree;
      m.values[std::size_t(j)][std::size_t(i)] = degree;
    }
  }
  return m;
}

SimilarityMatrix similarity_matrix_serial(const std::vector<std::vector<double>>& series,
                                          const std::vector<std::string>& labels,
                                          const GreyConfig& cfg) {
  validate_series(series, labels);
  SimilarityMatrix m;
  m.labels = labels;
  const std::size_t n = series.size();
  m.values.assign(n, std::vector<double>(n, 1.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double degree = relation_degree(series[i], series[j], cfg);
      m.values[i][j] = degree;
      m.values[j][i] = degree;
    }
  return m;
}

std::string SimilarityMatrix::to_csv() const {
  std::ostringstream out;
  out << "structure";
  for (const auto& l : labels) out << ',' << l;
  out << '\n';
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out << labels[i];
    for (std::size_t j = 0; j < labels.size(); ++j) out << ',' << format_double(values[i][j]);
    out << '\n';
  }
  return out.str();
}

}  // namespace rutcast::grey
