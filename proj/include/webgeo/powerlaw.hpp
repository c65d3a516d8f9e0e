#pragma once

#include <cstddef>
#include <span>

namespace webgeo {

struct PowerLawFit {
  double gamma = 0.0;
  long k_min = 0;
  double ks_distance = 0.0;
  std::size_t tail_size = 0;
};

// Discrete power-law tail fit, P(k) ∝ k^-gamma for k >= k_min.
//
// gamma maximizes the discrete likelihood (normalized by the Hurwitz zeta
// function) for a given k_min; k_min is the candidate minimizing the
// Kolmogorov-Smirnov distance between empirical and fitted tail CDFs.
// Candidates need at least `min_tail` samples and two distinct values.
// Throws FitUnreliable (carrying a best-effort estimate) when no candidate
// qualifies.
PowerLawFit fit_powerlaw(std::span<const long> degrees, std::size_t min_tail = 50);

// Maximum-likelihood gamma for a fixed cutoff (exposed for tests).
double powerlaw_mle(std::span<const long> sorted_tail, long k_min);

// Hurwitz zeta: sum_{n>=0} (n + q)^-s.
double hurwitz_zeta(double s, double q);

}  // namespace webgeo
