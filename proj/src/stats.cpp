#include "hpi/stats.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numeric>

#include "hpi/errors.hpp"

namespace hpi {

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw StatisticsError("linear_fit needs at least two points");
  const auto n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw StatisticsError("linear_fit needs two distinct abscissae");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  const double sse = std::max(0.0, syy - fit.slope * sxy);
  fit.r_squared = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  fit.slope_stderr = x.size() > 2 ? std::sqrt(sse / (n - 2.0) / sxx) : 0.0;
  return fit;
}

MeanVariance jackknife_mean_variance(std::span<const double> values) {
  const std::size_t count = values.size();
  if (count < 3) throw StatisticsError("jackknife needs at least three values");
  const auto n = static_cast<double>(count);
  double sum = 0.0, sumsq = 0.0;
  for (double v : values) {
    sum += v;
    sumsq += v * v;
  }
  MeanVariance out;
  out.mean = sum / n;
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  out.variance = ss / (n - 1.0);

  // Leave-one-out replicas from the running sums, centred to limit cancellation.
  double mean_dev = 0.0, var_dev = 0.0;
  for (double v : values) {
    const double m_i = (sum - v) / (n - 1.0);
    const double ss_i = ss - (v - out.mean) * (v - out.mean) * n / (n - 1.0);
    const double var_i = ss_i / (n - 2.0);
    mean_dev += (m_i - out.mean) * (m_i - out.mean);
    var_dev += (var_i - out.variance) * (var_i - out.variance);
  }
  out.mean_stderr = std::sqrt((n - 1.0) / n * mean_dev);
  out.variance_stderr = std::sqrt((n - 1.0) / n * var_dev);
  return out;
}

BatchEstimate batch_means(std::span<const double> series, std::size_t batches) {
  if (batches < 2 || series.size() < batches) throw StatisticsError("not enough samples for batch means");
  const std::size_t per = series.size() / batches;
  std::vector<double> means(batches, 0.0);
  for (std::size_t b = 0; b < batches; ++b) {
    means[b] = std::accumulate(series.begin() + static_cast<std::ptrdiff_t>(b * per),
                               series.begin() + static_cast<std::ptrdiff_t>((b + 1) * per), 0.0) /
               static_cast<double>(per);
  }
  const auto nb = static_cast<double>(batches);
  BatchEstimate est;
  est.mean = std::accumulate(means.begin(), means.end(), 0.0) / nb;
  double ss = 0.0;
  for (double m : means) ss += (m - est.mean) * (m - est.mean);
  est.error = std::sqrt(ss / (nb - 1.0) / nb);
  return est;
}

double integrated_autocorrelation_time(std::span<const double> series) {
  const std::size_t n = series.size();
  if (n < 2) return 0.5;
  const double mean = std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(n);
  auto autocov = [&](std::size_t lag) {
    double acc = 0.0;
    for (std::size_t i = 0; i + lag < n; ++i) acc += (series[i] - mean) * (series[i + lag] - mean);
    return acc / static_cast<double>(n - lag);
  };
  const double c0 = autocov(0);
  if (c0 <= 0.0) return 0.5;
  double tau = 0.5;
  for (std::size_t lag = 1; lag < n / 2; ++lag) {
    tau += autocov(lag) / c0;
    if (static_cast<double>(lag) >= 6.0 * tau) break;
  }
  return std::max(tau, 0.5);
}

double chi_square_p_value(double chi2, double dof) {
  if (!(dof > 0.0)) throw StatisticsError("chi-square needs positive degrees of freedom");
  if (chi2 <= 0.0) return 1.0;
  return boost::math::gamma_q(dof / 2.0, chi2 / 2.0);
}

}  // namespace hpi
