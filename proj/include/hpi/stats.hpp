#pragma once

// Small estimators shared by the simulation and the contour analyses.

#include <cstddef>
#include <span>
#include <vector>

namespace hpi {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double slope_stderr = 0.0;
};

/// Ordinary least squares y = slope x + intercept. Needs two distinct x.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

struct MeanVariance {
  double mean = 0.0;
  double variance = 0.0;  ///< unbiased
  double mean_stderr = 0.0;
  double variance_stderr = 0.0;
};

/// Sample mean and variance with delete-one jackknife errors.
MeanVariance jackknife_mean_variance(std::span<const double> values);

struct BatchEstimate {
  double mean = 0.0;
  double error = 0.0;
};

/// Mean of equal consecutive batches and the standard error of the batch
/// means. Trailing samples that do not fill a batch are dropped.
BatchEstimate batch_means(std::span<const double> series, std::size_t batches);

/// Integrated autocorrelation time with Sokal's automatic window (c = 6).
/// Returns 0.5 for an uncorrelated or constant series.
double integrated_autocorrelation_time(std::span<const double> series);

/// Upper tail Q(dof / 2, chi2 / 2).
double chi_square_p_value(double chi2, double dof);

}  // namespace hpi
