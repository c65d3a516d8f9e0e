#include "webgeo/powerlaw.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_zeta.h>

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>
#include <vector>

#include "webgeo/errors.hpp"

namespace webgeo {

namespace {

constexpr double kGammaLo = 1.01;
constexpr double kGammaHi = 10.0;

}  // namespace

double hurwitz_zeta(double s, double q) {
  gsl_sf_result r;
  const int status = gsl_sf_hzeta_e(s, q, &r);
  if (status == GSL_SUCCESS) return r.val;
  if (status == GSL_EUNDRFLW) return 0.0;
  return std::numeric_limits<double>::quiet_NaN();
}

double powerlaw_mle(std::span<const long> sorted_tail, long k_min) {
  double sum_log = 0.0;
  for (long k : sorted_tail) sum_log += std::log(static_cast<double>(k));
  const double n = static_cast<double>(sorted_tail.size());
  auto neg_loglik = [&](double g) {
    return n * std::log(hurwitz_zeta(g, static_cast<double>(k_min))) + g * sum_log;
  };
  const auto [gamma, value] =
      boost::math::tools::brent_find_minima(neg_loglik, kGammaLo, kGammaHi, std::numeric_limits<double>::digits / 2);
  (void)value;
  return gamma;
}

PowerLawFit fit_powerlaw(std::span<const long> degrees, std::size_t min_tail) {
  std::vector<long> sorted;
  sorted.reserve(degrees.size());
  for (long k : degrees) {
    if (k > 0) sorted.push_back(k);
  }
  std::sort(sorted.begin(), sorted.end());
  if (sorted.empty()) throw FitUnreliable("no positive samples", 0.0, 0);

  std::vector<long> distinct;
  std::unique_copy(sorted.begin(), sorted.end(), std::back_inserter(distinct));

  PowerLawFit best;
  bool found = false;
  // The last distinct value can never leave two distinct values in the tail.
  for (std::size_t c = 0; c + 1 < distinct.size(); ++c) {
    const long k_min = distinct[c];
    auto first = std::lower_bound(sorted.begin(), sorted.end(), k_min);
    const std::span<const long> tail(&*first, static_cast<std::size_t>(sorted.end() - first));
    if (tail.size() < min_tail) break;

    const double gamma = powerlaw_mle(tail, k_min);
    const double z_min = hurwitz_zeta(gamma, static_cast<double>(k_min));
    const double n = static_cast<double>(tail.size());
    double ks = 0.0;
    std::size_t seen = 0;
    for (std::size_t d = c; d < distinct.size(); ++d) {
      const long k = distinct[d];
      seen = static_cast<std::size_t>(std::upper_bound(tail.begin(), tail.end(), k) - tail.begin());
      const double emp = static_cast<double>(seen) / n;
      const double fit = 1.0 - hurwitz_zeta(gamma, static_cast<double>(k + 1)) / z_min;
      ks = std::max(ks, std::fabs(emp - fit));
    }
    if (!found || ks < best.ks_distance) {
      best = PowerLawFit{gamma, k_min, ks, tail.size()};
      found = true;
    }
  }
  if (!found) {
    const double estimate = powerlaw_mle(sorted, sorted.front());
    if (distinct.size() < 2) {
      throw FitUnreliable("all samples share one value", estimate, sorted.front());
    }
    throw FitUnreliable("fewer than " + std::to_string(min_tail) + " tail samples", estimate,
                        sorted.front());
  }
  return best;
}

}  // namespace webgeo
