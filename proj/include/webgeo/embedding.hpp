#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "webgeo/hyperbolic.hpp"
#include "webgeo/network.hpp"

namespace webgeo {

struct EmbeddingConfig {
  std::uint64_t seed = 0;
  std::size_t sweeps = 30;
  double tolerance = 1e-3;  // absolute log-likelihood gain that ends refinement
  std::size_t candidate_count = 32;
};

// Angle-averaged connection probability of the similarity (S1) formulation,
//   pbar(c) = (1/π) ∫_0^π dθ / (1 + (c θ)^β),
// tabulated once per β.
class AveragedKernel {
 public:
  explicit AveragedKernel(double beta);
  double beta() const { return beta_; }
  double operator()(double c) const;
  // ∫_0^z du / (1 + u^β)
  double primitive(double z) const;

 private:
  double beta_;
  double log_lo_;
  double step_;
  std::vector<double> table_;  // primitive at exp(log_lo_ + i * step_)
  double limit_;               // primitive at infinity
};

// Hidden degrees matched to observed degrees under the S1 model with inverse
// temperature beta. Nodes with equal degree share one hidden degree.
struct CalibrationState {
  std::vector<double> hidden_degrees;  // per node, > 0
  double kappa_min = 0.0;
  double mu = 0.0;
  double beta = 0.0;
  std::size_t iterations = 0;
  double max_relative_error = 0.0;  // |expected - observed| / observed, worst class
  bool converged = false;           // max_relative_error <= 2%
};

CalibrationState calibrate_hidden_degrees(std::span<const std::size_t> degrees, double beta,
                                          std::size_t max_iterations = 5000);

// Expected degree of every node implied by a calibration.
std::vector<double> expected_degrees(const CalibrationState& state);

// Mean local clustering of networks sampled from the S1 model with the given
// calibration and uniform angles, averaged over replicas drawn from `seed`.
double model_clustering(const CalibrationState& state, std::uint64_t seed, std::size_t replicas);

// Angles from the two leading non-trivial eigenvectors of the normalized
// Laplacian.
std::vector<double> laplacian_angles(const DomainNetwork& net);

struct EmbeddingReport {
  double gamma = 0.0;
  bool gamma_reliable = false;
  double observed_clustering = 0.0;
  double model_clustering = 0.0;
  bool temperature_converged = false;
  CalibrationState calibration;
  double initial_log_likelihood = 0.0;
  std::vector<double> sweep_log_likelihood;  // after each refinement sweep
  std::size_t saturated_pairs = 0;
};

// Maximum-likelihood hyperbolic coordinates for a connected network (N >= 10):
// power-law fit, temperature by clustering bisection, hidden-degree
// calibration fixing the radial coordinates and R, Laplacian-eigenmap angles,
// then coordinate-wise angular refinement in descending degree order.
// Deterministic given config.seed. When calibration misses its targets the
// result is returned with converged = false.
Embedding infer_embedding(const DomainNetwork& net, const EmbeddingConfig& config = {},
                          EmbeddingReport* report = nullptr);

// One refinement sweep over all nodes (exposed for tests). Returns the number
// of accepted moves; theta is updated in place and every accepted move
// strictly increases the log-likelihood.
std::size_t refine_sweep(const DomainNetwork& net, std::vector<PolarCoordinate>& coords,
                         double radius, double temperature, std::size_t candidate_count,
                         std::mt19937_64& rng);

}  // namespace webgeo
