#include "rutcast/loess.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "rutcast/util.hpp"

namespace rutcast::data {

namespace {

double tricube(double u) {
  const double a = 1.0 - u * u * u;
  return a * a * a;
}

}  // namespace

std::vector<double> loess_smooth(const std::vector<double>& y, const LoessConfig& cfg) {
  const int n = int(y.size());
  if (n < 2) throw ValidationError("loess_smooth: need at least 2 points");
  if (!(cfg.span > 0.0 && cfg.span <= 1.0)) throw ValidationError("loess_smooth: span must be in (0,1]");
  if (cfg.degree < 0 || cfg.degree > 2) throw ValidationError("loess_smooth: degree must be 0..2");
  for (double v : y)
    if (!std::isfinite(v)) throw ValidationError("loess_smooth: non-finite input");

  // Neighborhoods of fewer than 2 points would make smoothing a no-op, so
  // the window is clamped up instead of erroring on short series.
  const int q = std::clamp(int(std::ceil(cfg.span * n)), 2, n);

  std::vector<double> out(y.size());
  for (int i = 0; i < n; ++i) {
    // q nearest indices form a contiguous window; grow toward the closer side,
    // left on ties.
    int lo = i, hi = i;
    while (hi - lo + 1 < q) {
      const int dl = lo > 0 ? i - (lo - 1) : -1;
      const int dr = hi < n - 1 ? (hi + 1) - i : -1;
      if (dl >= 0 && (dr < 0 || dl <= dr))
        --lo;
      else
        ++hi;
    }
    const double h = double(std::max(i - lo, hi - i));

    double sw = 0.0, swy = 0.0;
    Eigen::Matrix3d a = Eigen::Matrix3d::Zero();
    Eigen::Vector3d b = Eigen::Vector3d::Zero();
    int positive = 0;
    double dmin = 0.0, dmax = 0.0;
    for (int j = lo; j <= hi; ++j) {
      const double d = double(j - i);
      const double w = h > 0.0 ? tricube(std::abs(d) / h) : 1.0;
      if (w <= 0.0) continue;
      ++positive;
      dmin = std::min(dmin, d);
      dmax = std::max(dmax, d);
      sw += w;
      swy += w * y[j];
      double dpow[5];
      dpow[0] = 1.0;
      for (int r = 1; r <= 2 * cfg.degree; ++r) dpow[r] = dpow[r - 1] * d;
      for (int r = 0; r <= cfg.degree; ++r) {
        for (int c = r; c <= cfg.degree; ++c) a(r, c) += w * dpow[r + c];
        b(r) += w * dpow[r] * y[j];
      }
    }
    // Too few usable points for the polynomial: fall back to a weighted mean.
    if (cfg.degree == 0 || positive <= cfg.degree || dmax - dmin <= 0.0) {
      out[i] = swy / sw;
      continue;
    }
    const int m = cfg.degree + 1;
    for (int r = 1; r < m; ++r)
      for (int c = 0; c < r; ++c) a(r, c) = a(c, r);
    Eigen::MatrixXd sys = a.topLeftCorner(m, m);
    Eigen::VectorXd rhs = b.head(m);
    Eigen::VectorXd coef = sys.ldlt().solve(rhs);
    if (!coef.allFinite()) {
      out[i] = swy / sw;
      continue;
    }
    out[i] = coef(0);  // fit evaluated at d = 0
  }
  return out;
}

std::vector<double> loess_smooth(const std::vector<double>& y, double span) {
  return loess_smooth(y, LoessConfig{span, 1});
}

}  // namespace rutcast::data
