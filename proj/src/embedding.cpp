#include "webgeo/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include <Eigen/Dense>

#include "webgeo/errors.hpp"
#include "webgeo/parallel.hpp"
#include "webgeo/powerlaw.hpp"
#include "webgeo/topology.hpp"

namespace webgeo {

namespace {

constexpr double kTableLo = -30.0;
constexpr double kTableHi = 40.0;
constexpr double kTableStep = 0.005;

constexpr double kTemperatureLo = 0.05;
constexpr double kTemperatureHi = 0.95;
constexpr double kTemperatureWidth = 0.01;
constexpr double kClusteringTolerance = 0.02;
constexpr double kDegreeTolerance = 0.02;
constexpr double kDegreeTarget = 1e-3;  // calibration keeps going until this, or the budget

double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::fabs(z))); }

// integrand of the primitive after u = e^s
double integrand(double s, double beta) { return std::exp(s - softplus(beta * s)); }

// Independent streams per purpose so adding a draw in one stage never shifts another.
std::mt19937_64 stream(std::uint64_t seed, std::uint64_t tag) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(tag >> 32)};
  return std::mt19937_64(seq);
}

double clustering_of(std::vector<std::vector<std::uint32_t>>& adj) {
  const std::size_t n = adj.size();
  std::vector<char> mark(n, 0);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& nb = adj[i];
    if (nb.size() < 2) continue;
    for (auto v : nb) mark[v] = 1;
    std::size_t links = 0;
    for (auto v : nb) {
      for (auto w : adj[v]) links += mark[w];
    }
    for (auto v : nb) mark[v] = 0;
    const double k = static_cast<double>(nb.size());
    total += static_cast<double>(links) / (k * (k - 1.0));  // each triangle edge seen twice
  }
  return total / static_cast<double>(n);
}

}  // namespace

AveragedKernel::AveragedKernel(double beta)
    : beta_(beta), log_lo_(kTableLo), step_(kTableStep) {
  if (!(beta > 1.0)) throw ParameterError("the averaged kernel needs beta > 1");
  limit_ = (kPi / beta) / std::sin(kPi / beta);
  const auto count = static_cast<std::size_t>(std::llround((kTableHi - kTableLo) / step_)) + 1;
  table_.resize(count);
  const double z0 = std::exp(log_lo_);
  table_[0] = z0 - std::pow(z0, 1.0 + beta) / (1.0 + beta);
  // Simpson per cell in log space
  for (std::size_t i = 1; i < count; ++i) {
    const double a = log_lo_ + static_cast<double>(i - 1) * step_;
    const double b = a + step_;
    table_[i] = table_[i - 1] + step_ / 6.0 *
                                    (integrand(a, beta) + 4.0 * integrand(0.5 * (a + b), beta) +
                                     integrand(b, beta));
  }
}

double AveragedKernel::primitive(double z) const {
  if (z <= 0.0) return 0.0;
  const double s = std::log(z);
  if (s <= log_lo_) return z - std::pow(z, 1.0 + beta_) / (1.0 + beta_);
  const double pos = (s - log_lo_) / step_;
  const auto cell = static_cast<std::size_t>(pos);
  if (cell + 1 >= table_.size()) {
    return limit_ - std::pow(z, 1.0 - beta_) / (beta_ - 1.0) +
           std::pow(z, 1.0 - 2.0 * beta_) / (2.0 * beta_ - 1.0);
  }
  // finish the partial cell with its own Simpson step
  const double a = log_lo_ + static_cast<double>(cell) * step_;
  const double h = s - a;
  return table_[cell] + h / 6.0 *
                            (integrand(a, beta_) + 4.0 * integrand(a + 0.5 * h, beta_) +
                             integrand(s, beta_));
}

double AveragedKernel::operator()(double c) const {
  if (c <= 0.0) return 1.0;
  const double z = kPi * c;
  return std::min(1.0, primitive(z) / z);
}

CalibrationState calibrate_hidden_degrees(std::span<const std::size_t> degrees, double beta,
                                          std::size_t max_iterations) {
  const std::size_t n = degrees.size();
  if (n < 2) throw DataError("calibration needs at least two nodes");
  for (auto k : degrees) {
    if (k == 0) throw DataError("calibration needs nodes of positive degree");
  }
  const double mean_k =
      static_cast<double>(std::accumulate(degrees.begin(), degrees.end(), std::size_t{0})) /
      static_cast<double>(n);

  std::map<std::size_t, std::size_t> class_size;
  for (auto k : degrees) ++class_size[k];
  std::vector<double> k_class, n_class;
  for (auto [k, m] : class_size) {
    k_class.push_back(static_cast<double>(k));
    n_class.push_back(static_cast<double>(m));
  }
  const std::size_t classes = k_class.size();

  CalibrationState st;
  st.beta = beta;
  st.mu = beta * std::sin(kPi / beta) / (2.0 * kPi * mean_k);
  const AveragedKernel kernel(beta);
  const double scale = static_cast<double>(n) / (2.0 * kPi * st.mu);

  std::vector<double> kappa = k_class;
  std::vector<double> expected(classes);
  auto evaluate = [&] {
    double worst = 0.0;
    for (std::size_t a = 0; a < classes; ++a) {
      double sum = 0.0;
      for (std::size_t b = 0; b < classes; ++b) {
        const double p = kernel(scale / (kappa[a] * kappa[b]));
        sum += (n_class[b] - (a == b ? 1.0 : 0.0)) * p;
      }
      expected[a] = sum;
      worst = std::max(worst, std::fabs(sum - k_class[a]) / k_class[a]);
    }
    return worst;
  };

  double worst = evaluate();
  std::size_t it = 0;
  while (worst > kDegreeTarget && it < max_iterations) {
    for (std::size_t a = 0; a < classes; ++a) {
      if (expected[a] > 0.0) kappa[a] *= k_class[a] / expected[a];
    }
    ++it;
    worst = evaluate();
    if (!std::isfinite(worst)) break;
  }
  st.iterations = it;
  st.max_relative_error = worst;
  st.converged = worst <= kDegreeTolerance;

  std::map<std::size_t, double> by_degree;
  for (std::size_t a = 0; a < classes; ++a) by_degree[static_cast<std::size_t>(k_class[a])] = kappa[a];
  st.hidden_degrees.resize(n);
  for (std::size_t i = 0; i < n; ++i) st.hidden_degrees[i] = by_degree[degrees[i]];
  st.kappa_min = *std::min_element(kappa.begin(), kappa.end());
  return st;
}

std::vector<double> expected_degrees(const CalibrationState& state) {
  const std::size_t n = state.hidden_degrees.size();
  const AveragedKernel kernel(state.beta);
  const double scale = static_cast<double>(n) / (2.0 * kPi * state.mu);
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double p = kernel(scale / (state.hidden_degrees[i] * state.hidden_degrees[j]));
      out[i] += p;
      out[j] += p;
    }
  }
  return out;
}

double model_clustering(const CalibrationState& state, std::uint64_t seed, std::size_t replicas) {
  const std::size_t n = state.hidden_degrees.size();
  if (replicas == 0) throw ParameterError("at least one replica is needed");
  std::vector<double> per_replica(replicas, 0.0);
  const double scale = static_cast<double>(n) / (2.0 * kPi * state.mu);
  parallel_blocks(replicas, [&](std::size_t r) {
    // same draws for every temperature (common random numbers)
    auto rng = stream(seed, 0x5eed0000u + r);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> theta(n);
    for (auto& t : theta) t = unit(rng) * kTwoPi;
    std::vector<std::vector<std::uint32_t>> adj(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double d = angular_separation(theta[i], theta[j]);
        const double c = scale * d / (state.hidden_degrees[i] * state.hidden_degrees[j]);
        const double p = 1.0 / (1.0 + std::pow(c, state.beta));
        if (unit(rng) < p) {
          adj[i].push_back(static_cast<std::uint32_t>(j));
          adj[j].push_back(static_cast<std::uint32_t>(i));
        }
      }
    }
    per_replica[r] = clustering_of(adj);
  });
  double total = 0.0;
  for (double c : per_replica) total += c;
  return total / static_cast<double>(replicas);
}

std::vector<double> laplacian_angles(const DomainNetwork& net) {
  const std::size_t n = net.size();
  if (n < 3) throw DataError("spectral angles need at least three nodes");
  std::vector<double> inv_sqrt(n);
  for (NodeId u = 0; u < n; ++u) {
    if (net.degree(u) == 0) throw DisconnectedError("isolated node '" + net.label(u) + "'");
    inv_sqrt[u] = 1.0 / std::sqrt(static_cast<double>(net.degree(u)));
  }
  Eigen::MatrixXd lap = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v : net.neighbors(u)) lap(u, v) = -inv_sqrt[u] * inv_sqrt[v];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap);
  if (solver.info() != Eigen::Success) throw NonConvergence("Laplacian eigendecomposition failed");
  const auto& vec = solver.eigenvectors();
  std::vector<double> theta(n);
  for (NodeId u = 0; u < n; ++u) {
    const double x = vec(u, 1) * inv_sqrt[u];
    const double y = vec(u, 2) * inv_sqrt[u];
    theta[u] = wrap_angle(std::atan2(y, x));
  }
  return theta;
}

std::size_t refine_sweep(const DomainNetwork& net, std::vector<PolarCoordinate>& coords,
                         double radius, double temperature, std::size_t candidate_count,
                         std::mt19937_64& rng) {
  const std::size_t n = net.size();
  if (coords.size() != n) throw DataError("coordinate count does not match the network");
  if (candidate_count == 0) throw ParameterError("candidate_count must be positive");
  // validates R and T
  (void)connection_probability(radius, radius, temperature);

  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), NodeId{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](NodeId a, NodeId b) { return net.degree(a) > net.degree(b); });

  std::vector<double> sinh_r(n), base(n), scaled(n);
  for (std::size_t j = 0; j < n; ++j) sinh_r[j] = std::sinh(coords[j].r);
  std::vector<char> linked(n, 0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t accepted = 0;

  constexpr std::size_t kBlocks = 8;
  for (NodeId i : order) {
    for (std::size_t j = 0; j < n; ++j) {
      const double dr = std::sinh((coords[i].r - coords[j].r) / 2.0);
      base[j] = 2.0 * dr * dr;
      scaled[j] = 2.0 * sinh_r[i] * sinh_r[j];
    }
    for (NodeId v : net.neighbors(i)) linked[v] = 1;

    auto local = [&](double theta) {
      double sum = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        const double half = std::sin(angular_separation(theta, coords[j].theta) / 2.0);
        const double x = distance_from_excess(base[j] + scaled[j] * half * half);
        sum += pair_log_likelihood(x, radius, temperature, linked[j] != 0);
      }
      return sum;
    };

    std::vector<double> candidates;
    candidates.reserve(candidate_count);
    candidates.push_back(coords[i].theta);
    if (candidate_count > 1) {
      double sx = 0.0, sy = 0.0;
      for (NodeId v : net.neighbors(i)) {
        sx += std::cos(coords[v].theta);
        sy += std::sin(coords[v].theta);
      }
      candidates.push_back(std::hypot(sx, sy) > 1e-12 ? wrap_angle(std::atan2(sy, sx)) : coords[i].theta);
    }
    while (candidates.size() < candidate_count) candidates.push_back(unit(rng) * kTwoPi);

    std::vector<double> score(candidates.size());
    const std::size_t blocks = std::min(kBlocks, candidates.size());
    parallel_blocks(blocks, [&](std::size_t b) {
      for (std::size_t c = b; c < candidates.size(); c += blocks) score[c] = local(candidates[c]);
    });

    std::size_t best = 0;
    for (std::size_t c = 1; c < candidates.size(); ++c) {
      if (score[c] > score[best]) best = c;
    }
    // strict gain with a rounding margin; the current angle wins ties
    const double margin = 1e-12 * std::max(1.0, std::fabs(score[0]));
    if (best != 0 && score[best] > score[0] + margin) {
      coords[i].theta = candidates[best];
      ++accepted;
    }
    for (NodeId v : net.neighbors(i)) linked[v] = 0;
  }
  return accepted;
}

Embedding infer_embedding(const DomainNetwork& net, const EmbeddingConfig& config,
                          EmbeddingReport* report) {
  const std::size_t n = net.size();
  if (n < 10) throw DataError("embedding needs at least 10 nodes, got " + std::to_string(n));
  if (!net.is_connected()) throw DisconnectedError("embedding needs a connected network");
  if (config.candidate_count == 0) throw ParameterError("candidate_count must be positive");
  if (!(config.tolerance >= 0.0)) throw ParameterError("tolerance must be non-negative");

  EmbeddingReport rep;
  std::vector<std::size_t> degrees(n);
  std::vector<long> degree_sample(n);
  for (NodeId u = 0; u < n; ++u) {
    degrees[u] = net.degree(u);
    degree_sample[u] = static_cast<long>(degrees[u]);
  }

  // (1) degree tail
  try {
    const auto fit = fit_powerlaw(degree_sample);
    rep.gamma = fit.gamma;
    rep.gamma_reliable = true;
  } catch (const FitUnreliable& e) {
    rep.gamma = e.gamma();
    rep.gamma_reliable = false;
  }

  // (2) temperature: model clustering decreases with T
  rep.observed_clustering = mean_clustering(net);
  const std::size_t replicas =
      std::clamp<std::size_t>((20000 + n - 1) / n, 2, 50);
  auto clustering_at = [&](double t) {
    return model_clustering(calibrate_hidden_degrees(degrees, 1.0 / t), config.seed, replicas);
  };
  double lo = kTemperatureLo, hi = kTemperatureHi;
  while (hi - lo > kTemperatureWidth) {
    const double mid = 0.5 * (lo + hi);
    if (clustering_at(mid) > rep.observed_clustering) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double temperature = 0.5 * (lo + hi);

  // (3) hidden degrees, radii, disk radius
  rep.calibration = calibrate_hidden_degrees(degrees, 1.0 / temperature);
  rep.model_clustering = model_clustering(rep.calibration, config.seed, replicas);
  rep.temperature_converged =
      std::fabs(rep.model_clustering - rep.observed_clustering) <= kClusteringTolerance;
  const auto& cal = rep.calibration;
  double radius = 2.0 * std::log(static_cast<double>(n) / (kPi * cal.mu * cal.kappa_min * cal.kappa_min));
  radius = std::max(radius, 1e-3);
  std::vector<PolarCoordinate> coords(n);
  for (NodeId u = 0; u < n; ++u) {
    coords[u].r = std::max(0.0, radius - 2.0 * std::log(cal.hidden_degrees[u] / cal.kappa_min));
  }

  // (4) spectral angles
  const auto theta = laplacian_angles(net);
  for (NodeId u = 0; u < n; ++u) coords[u].theta = theta[u];
  rep.initial_log_likelihood = log_likelihood(net, coords, radius, temperature);

  // (5) refinement
  auto rng = stream(config.seed, 0xa11c0000u);
  double current = rep.initial_log_likelihood;
  for (std::size_t s = 0; s < config.sweeps; ++s) {
    refine_sweep(net, coords, radius, temperature, config.candidate_count, rng);
    const double next = log_likelihood(net, coords, radius, temperature);
    rep.sweep_log_likelihood.push_back(next);
    const double gain = next - current;
    current = next;
    if (gain < config.tolerance) break;
  }

  // (6)
  Embedding emb;
  emb.level = net.level();
  emb.radius = radius;
  emb.temperature = temperature;
  emb.seed = config.seed;
  emb.gamma = rep.gamma;
  emb.converged = cal.converged && rep.temperature_converged;
  for (NodeId u = 0; u < n; ++u) {
    emb.labels.push_back(net.label(u));
    emb.coords.push_back(coords[u]);
    emb.degrees.push_back(degrees[u]);
    emb.meta.push_back(net.meta(u));
  }
  emb.reindex();
  LikelihoodDiagnostics diag;
  emb.log_likelihood = log_likelihood(net, emb.coords, radius, temperature, &diag);
  rep.saturated_pairs = diag.saturated_pairs;
  if (report) *report = std::move(rep);
  return emb;
}

}  // namespace webgeo
