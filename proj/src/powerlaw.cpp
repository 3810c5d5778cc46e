#include "mplex/powerlaw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include <boost/math/special_functions/bernoulli.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/tools/minima.hpp>

#include "mplex/error.hpp"

namespace mplex {
namespace {

constexpr int brent_bits = 40;
constexpr double alpha_lo = 1.0 + 1e-9;
constexpr double alpha_hi = 30.0;

struct ValueCount {
  double value;
  double count;
};

// Sorted unique values with multiplicities.
std::vector<ValueCount> tabulate(std::vector<double> x) {
  std::sort(x.begin(), x.end());
  std::vector<ValueCount> table;
  for (double v : x) {
    if (!table.empty() && table.back().value == v)
      table.back().count += 1.0;
    else
      table.push_back({v, 1.0});
  }
  return table;
}

double discrete_alpha_exact(std::span<const ValueCount> tail, double x_min, double n, double sum_log) {
  double start = 1.0 + n / std::accumulate(tail.begin(), tail.end(), 0.0, [&](double acc, const ValueCount& t) {
                   return acc + t.count * std::log(t.value / (x_min - 0.5));
                 });
  auto negative_log_likelihood = [&](double a) { return a * sum_log + n * std::log(hurwitz_zeta(a, x_min)); };
  // The likelihood is log-concave in alpha, so a bracket around the
  // approximate estimate that is wide enough on both sides suffices.
  double lo = std::max(alpha_lo, std::min(start, 2.0) - 1.0);
  double hi = std::min(alpha_hi, std::max(start, 2.0) * 2.0 + 1.0);
  return boost::math::tools::brent_find_minima(negative_log_likelihood, lo, hi, brent_bits).first;
}

// Fitted tail CDF minus the empirical one, maximized over the support.
double discrete_ks(std::span<const ValueCount> tail, double x_min, double alpha, double n) {
  const double z0 = hurwitz_zeta(alpha, x_min);
  double cum = 0.0, worst = 0.0;
  for (std::size_t k = 0; k < tail.size(); ++k) {
    cum += tail[k].count;
    const double emp = cum / n;
    const double at = 1.0 - hurwitz_zeta(alpha, tail[k].value + 1.0) / z0;
    worst = std::max(worst, std::abs(emp - at));
    // Empirical CDF is flat up to the next observed value; the model CDF is
    // largest just before it.
    if (k + 1 < tail.size() && tail[k + 1].value > tail[k].value + 1.0) {
      const double before = 1.0 - hurwitz_zeta(alpha, tail[k + 1].value) / z0;
      worst = std::max(worst, std::abs(emp - before));
    }
  }
  return worst;
}

double continuous_ks(std::span<const ValueCount> tail, double x_min, double alpha, double n) {
  double cum = 0.0, worst = 0.0;
  for (const auto& t : tail) {
    const double model = 1.0 - std::pow(t.value / x_min, 1.0 - alpha);
    worst = std::max(worst, std::abs(cum / n - model));
    cum += t.count;
    worst = std::max(worst, std::abs(cum / n - model));
  }
  return worst;
}

struct Candidate {
  double alpha;
  double ks;
};

std::optional<Candidate> fit_at(std::span<const ValueCount> tail, PowerLawMode mode, double x_min) {
  if (tail.size() < 2) return std::nullopt;
  double n = 0.0, sum_log = 0.0;
  for (const auto& t : tail) {
    n += t.count;
    sum_log += t.count * std::log(t.value);
  }
  if (mode == PowerLawMode::continuous) {
    const double denom = sum_log - n * std::log(x_min);
    if (!(denom > 0.0)) return std::nullopt;
    const double alpha = 1.0 + n / denom;
    return Candidate{alpha, continuous_ks(tail, x_min, alpha, n)};
  }
  const double alpha = discrete_alpha_exact(tail, x_min, n, sum_log);
  return Candidate{alpha, discrete_ks(tail, x_min, alpha, n)};
}

// log of the standard normal survival function 1 - Phi(z).
double log_normal_survival(double z) {
  if (z < 25.0) return std::log(0.5 * boost::math::erfc(z / std::numbers::sqrt2));
  // Asymptotic series for the Mills ratio.
  const double z2 = z * z;
  return -0.5 * z2 - std::log(z * std::sqrt(2.0 * std::numbers::pi)) +
         std::log1p(-1.0 / z2 + 3.0 / (z2 * z2) - 15.0 / (z2 * z2 * z2));
}

// log(exp(a) - exp(b)) for a >= b.
double log_diff_exp(double a, double b) {
  if (b == -std::numeric_limits<double>::infinity()) return a;
  return a + std::log(-std::expm1(b - a));
}

struct LognormalModel {
  PowerLawMode mode;
  double x_min;

  // Per-observation log probability (mass or density) of the truncated model.
  double log_prob(double x, double mu, double sigma) const {
    if (mode == PowerLawMode::continuous) {
      const double z = (std::log(x) - mu) / sigma;
      return -0.5 * z * z - std::log(x * sigma * std::sqrt(2.0 * std::numbers::pi)) -
             log_normal_survival((std::log(x_min) - mu) / sigma);
    }
    const double lo = log_normal_survival((std::log(x - 0.5) - mu) / sigma);
    const double hi = log_normal_survival((std::log(x + 0.5) - mu) / sigma);
    const double norm = log_normal_survival((std::log(x_min - 0.5) - mu) / sigma);
    double mass = log_diff_exp(lo, hi);
    if (!std::isfinite(mass)) {
      // The two tails agree to rounding: integrate the density over the unit bin instead.
      const double z = (std::log(x) - mu) / sigma;
      mass = -0.5 * z * z - std::log(x * sigma * std::sqrt(2.0 * std::numbers::pi));
    }
    return mass - norm;
  }

  double log_likelihood(std::span<const ValueCount> tail, double mu, double sigma) const {
    double total = 0.0;
    for (const auto& t : tail) total += t.count * log_prob(t.value, mu, sigma);
    return total;
  }
};

}  // namespace

double hurwitz_zeta(double s, double q) {
  if (!(s > 1.0) || !(q > 0.0)) throw precondition_error("hurwitz zeta needs s > 1 and q > 0");
  // Euler-Maclaurin summation after shifting q by N terms.
  constexpr int N = 12;
  constexpr int M = 10;
  double sum = 0.0;
  for (int k = 0; k < N; ++k) sum += std::pow(q + k, -s);
  const double a = q + N;
  sum += std::pow(a, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(a, -s);
  double rising = s;  // s (s+1) ... (s + 2j - 2)
  double power = std::pow(a, -s - 1.0);
  double factorial = 2.0;  // (2j)!
  for (int j = 1; j <= M; ++j) {
    sum += boost::math::bernoulli_b2n<double>(j) / factorial * rising * power;
    rising *= (s + 2 * j - 1) * (s + 2 * j);
    power /= a * a;
    factorial *= (2.0 * j + 1.0) * (2.0 * j + 2.0);
  }
  return sum;
}

double discrete_alpha_approx(std::span<const double> tail, double x_min) {
  if (tail.empty()) throw precondition_error("empty tail");
  double s = 0.0;
  for (double x : tail) s += std::log(x / (x_min - 0.5));
  return 1.0 + static_cast<double>(tail.size()) / s;
}

PowerLawFit fit_power_law(std::span<const double> sample, const PowerLawOptions& options) {
  for (double x : sample) {
    if (!(x > 0.0) || !std::isfinite(x)) throw precondition_error("power-law samples must be positive and finite");
    if (options.mode == PowerLawMode::discrete && x != std::floor(x))
      throw precondition_error("discrete power-law samples must be integers");
  }
  if (sample.size() < options.min_tail)
    throw precondition_error("power-law fit needs at least " + std::to_string(options.min_tail) + " observations");
  auto table = tabulate({sample.begin(), sample.end()});
  if (table.size() == 1) throw degenerate_error("power-law fit undefined: all values are equal");

  // Observations at or above each table entry.
  std::vector<double> above(table.size() + 1, 0.0);
  for (std::size_t k = table.size(); k-- > 0;) above[k] = above[k + 1] + table[k].count;

  PowerLawFit best;
  best.mode = options.mode;
  best.ks = std::numeric_limits<double>::infinity();
  bool found = false;
  for (std::size_t k = 0; k < table.size(); ++k) {
    const double x_min = options.x_min ? *options.x_min : table[k].value;
    if (options.x_min) {
      auto first = std::lower_bound(table.begin(), table.end(), x_min,
                                    [](const ValueCount& t, double v) { return t.value < v; });
      k = static_cast<std::size_t>(first - table.begin());
    }
    if (above[k] < static_cast<double>(options.min_tail)) break;
    std::span<const ValueCount> tail(table.data() + k, table.size() - k);
    if (auto c = fit_at(tail, options.mode, x_min); c && c->ks < best.ks) {
      best.alpha = c->alpha;
      best.ks = c->ks;
      best.x_min = x_min;
      best.n_tail = static_cast<std::size_t>(above[k]);
      found = true;
    }
    if (options.x_min) break;
  }
  if (!found) {
    if (options.x_min) throw precondition_error("fewer than the minimum tail observations above the fixed cutoff");
    throw degenerate_error("power-law fit undefined: no cutoff leaves a nondegenerate tail");
  }
  return best;
}

PowerLawFit fit_power_law(const std::vector<std::size_t>& sample, const PowerLawOptions& options) {
  std::vector<double> x(sample.begin(), sample.end());
  return fit_power_law(std::span<const double>(x), options);
}

LikelihoodRatio compare_lognormal(std::span<const double> sample, const PowerLawFit& fit) {
  std::vector<double> tail_values;
  for (double x : sample)
    if (x >= fit.x_min) tail_values.push_back(x);
  if (tail_values.size() < 10) throw precondition_error("likelihood-ratio test needs at least 10 tail observations");
  auto tail = tabulate(tail_values);
  const double n = static_cast<double>(tail_values.size());
  LognormalModel model{fit.mode, fit.x_min};

  double mean_log = 0.0, var_log = 0.0;
  for (const auto& t : tail) mean_log += t.count * std::log(t.value);
  mean_log /= n;
  for (const auto& t : tail) var_log += t.count * std::pow(std::log(t.value) - mean_log, 2);
  const double sd_log = std::max(std::sqrt(var_log / n), 1e-3);

  // Profile likelihood: inner search over mu for each sigma.
  const double mu_lo = mean_log - 40.0 * sd_log - 10.0;
  const double mu_hi = mean_log + 10.0 * sd_log;
  auto best_mu = [&](double sigma) {
    return boost::math::tools::brent_find_minima(
        [&](double mu) { return -model.log_likelihood(tail, mu, sigma); }, mu_lo, mu_hi, brent_bits);
  };
  auto profile = boost::math::tools::brent_find_minima(
      [&](double log_sigma) { return best_mu(std::exp(log_sigma)).second; }, std::log(sd_log) - 5.0,
      std::log(sd_log) + 4.0, brent_bits);
  const double sigma = std::exp(profile.first);
  const double mu = best_mu(sigma).first;

  std::vector<double> diffs;
  diffs.reserve(tail.size());
  const double log_z = fit.mode == PowerLawMode::discrete ? std::log(hurwitz_zeta(fit.alpha, fit.x_min)) : 0.0;
  double total = 0.0;
  for (const auto& t : tail) {
    double log_pl = 0.0;
    if (fit.mode == PowerLawMode::discrete)
      log_pl = -fit.alpha * std::log(t.value) - log_z;
    else
      log_pl = std::log((fit.alpha - 1.0) / fit.x_min) - fit.alpha * std::log(t.value / fit.x_min);
    const double d = log_pl - model.log_prob(t.value, mu, sigma);
    diffs.push_back(d);
    total += t.count * d;
  }
  const double mean_diff = total / n;
  double var = 0.0;
  for (std::size_t k = 0; k < tail.size(); ++k) var += tail[k].count * std::pow(diffs[k] - mean_diff, 2);
  var /= n;

  LikelihoodRatio result;
  result.n_tail = tail_values.size();
  result.lognormal_mu = mu;
  result.lognormal_sigma = sigma;
  if (var > 0.0) {
    result.normalized_llr = total / std::sqrt(n * var);
    result.p_value = boost::math::erfc(std::abs(result.normalized_llr) / std::numbers::sqrt2);
  }
  return result;
}

std::vector<CcdfPoint> ccdf(std::span<const double> sample) {
  if (sample.empty()) throw precondition_error("ccdf of an empty sample");
  auto table = tabulate({sample.begin(), sample.end()});
  const double n = static_cast<double>(sample.size());
  std::vector<CcdfPoint> points;
  double below = 0.0;
  for (const auto& t : table) {
    below += t.count;
    points.push_back({t.value, (n - below) / n});
  }
  return points;
}

}  // namespace mplex
