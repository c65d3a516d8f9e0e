#include "webgeo/synthetic.hpp"

#include <cmath>
#include <map>
#include <random>
#include <string>

#include "webgeo/errors.hpp"

namespace webgeo {

namespace {

std::vector<PolarCoordinate> place(const std::vector<double>& log_kappa,
                                   const std::vector<double>& theta, double radius) {
  std::vector<PolarCoordinate> pts(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) {
    pts[i] = {std::max(0.0, radius - 2.0 * log_kappa[i]), theta[i]};
  }
  return pts;
}

double expected_mean_degree(const std::vector<PolarCoordinate>& pts, double radius, double temperature) {
  double sum = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      sum += connection_probability(hyperbolic_distance(pts[i], pts[j]), radius, temperature);
    }
  }
  return 2.0 * sum / static_cast<double>(pts.size());
}

}  // namespace

SyntheticNetwork generate_synthetic(std::size_t n, double gamma, double temperature,
                                    double mean_degree, std::uint64_t seed) {
  if (n < 10) throw ParameterError("synthetic networks need n >= 10");
  if (!(gamma > 2.0)) throw ParameterError("gamma must exceed 2");
  if (!(temperature > 0.0 && temperature < 1.0)) throw ParameterError("temperature must lie in (0, 1)");
  if (!(mean_degree > 0.0 && mean_degree < static_cast<double>(n - 1))) {
    throw ParameterError("mean degree must lie in (0, n - 1)");
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> log_kappa(n), theta(n);
  for (std::size_t i = 0; i < n; ++i) {
    // Pareto with kappa_min = 1: kappa = (1 - u)^(-1 / (gamma - 1))
    log_kappa[i] = -std::log1p(-unit(rng)) / (gamma - 1.0);
    theta[i] = unit(rng) * kTwoPi;
  }

  // Expected degree decreases as R grows; bisect in R.
  double lo = 1e-3, hi = 4.0 * std::log(static_cast<double>(n)) + 20.0;
  if (expected_mean_degree(place(log_kappa, theta, lo), lo, temperature) < mean_degree) {
    throw GenerationError("target mean degree unreachable for these parameters");
  }
  for (int it = 0; it < 100 && hi - lo > 1e-10; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (expected_mean_degree(place(log_kappa, theta, mid), mid, temperature) > mean_degree) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double radius = 0.5 * (lo + hi);
  const auto pts = place(log_kappa, theta, radius);

  const std::size_t width = std::to_string(n - 1).size();
  std::vector<std::string> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::string digits = std::to_string(i);
    labels[i] = "n" + std::string(width - digits.size(), '0') + digits;
  }

  std::map<std::pair<std::string, std::string>, std::size_t> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double p = connection_probability(hyperbolic_distance(pts[i], pts[j]), radius, temperature);
      if (unit(rng) < p) edges[{labels[i], labels[j]}] = 1;
    }
  }
  if (edges.empty()) throw GenerationError("no links were generated");

  SyntheticNetwork out;
  out.generated_nodes = n;
  out.network = DomainNetwork::from_labelled_edges(Level::tld1, edges).largest_component();
  if (out.network.size() < 2) throw GenerationError("largest component is trivial");

  Embedding& truth = out.truth;
  truth.level = Level::tld1;
  truth.radius = radius;
  truth.temperature = temperature;
  truth.seed = seed;
  truth.gamma = gamma;
  for (NodeId u = 0; u < out.network.size(); ++u) {
    const std::string& label = out.network.label(u);
    const auto original = static_cast<std::size_t>(std::stoul(label.substr(1)));
    truth.labels.push_back(label);
    truth.coords.push_back(pts[original]);
    truth.degrees.push_back(out.network.degree(u));
    truth.meta.push_back(out.network.meta(u));
  }
  truth.reindex();
  truth.log_likelihood = log_likelihood(out.network, truth.coords, radius, temperature);
  return out;
}

}  // namespace webgeo
