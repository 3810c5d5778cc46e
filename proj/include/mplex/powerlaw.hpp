#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace mplex {

enum class PowerLawMode { discrete, continuous };

struct PowerLawOptions {
  PowerLawMode mode = PowerLawMode::discrete;
  // Fixes the lower cutoff instead of scanning for the KS-optimal one.
  std::optional<double> x_min;
  std::size_t min_tail = 10;
};

struct PowerLawFit {
  double alpha = 0.0;
  double x_min = 0.0;
  double ks = 0.0;
  std::size_t n_tail = 0;
  PowerLawMode mode = PowerLawMode::discrete;
};

// Maximum-likelihood power-law tail fit with the cutoff chosen to minimize the
// Kolmogorov-Smirnov distance between the empirical and fitted tail CDF.
// Discrete mode requires positive integers; continuous mode positive reals.
PowerLawFit fit_power_law(std::span<const double> sample, const PowerLawOptions& options = {});
PowerLawFit fit_power_law(const std::vector<std::size_t>& sample, const PowerLawOptions& options = {});

// 1 + n / sum(ln(x / (x_min - 1/2))), the usual closed-form approximation to
// the discrete estimator. Used as the starting point of the exact fit.
double discrete_alpha_approx(std::span<const double> tail, double x_min);

// Hurwitz zeta function sum_{k>=0} (q + k)^-s for s > 1, q > 0.
double hurwitz_zeta(double s, double q);

struct LikelihoodRatio {
  double normalized_llr = 0.0;  // > 0 favors the power law
  double p_value = 1.0;         // two-sided, normal approximation
  std::size_t n_tail = 0;
  double lognormal_mu = 0.0;
  double lognormal_sigma = 0.0;
};

// Vuong test of the fitted power law against a lognormal truncated at the same
// cutoff and fitted by maximum likelihood on the same tail.
LikelihoodRatio compare_lognormal(std::span<const double> sample, const PowerLawFit& fit);

struct CcdfPoint {
  double value;
  double probability;  // P(X > value)
};

std::vector<CcdfPoint> ccdf(std::span<const double> sample);

}  // namespace mplex
