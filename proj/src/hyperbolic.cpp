#include "webgeo/hyperbolic.hpp"

#include <algorithm>
#include <cmath>

#include "webgeo/errors.hpp"

namespace webgeo {

namespace {

constexpr double kExpCap = 700.0;

double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::fabs(z))); }

void check_parameters(double radius, double temperature) {
  if (!(temperature > 0.0 && temperature < 1.0)) {
    throw ParameterError("temperature must lie in (0, 1), got " + std::to_string(temperature));
  }
  if (!(radius > 0.0)) throw ParameterError("disk radius must be positive");
}

}  // namespace

double wrap_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  if (t >= kTwoPi) t = 0.0;
  return t;
}

double angular_separation(double a, double b) { return kPi - std::fabs(kPi - std::fabs(a - b)); }

double hyperbolic_cosh_distance(PolarCoordinate a, PolarCoordinate b) {
  const double half = std::sin(angular_separation(a.theta, b.theta) / 2.0);
  return std::cosh(a.r - b.r) + 2.0 * std::sinh(a.r) * std::sinh(b.r) * half * half;
}

double distance_from_excess(double w) {
  // acosh(1 + w) without the cancellation near w = 0
  w = std::max(0.0, w);
  return std::log1p(w + std::sqrt(w * (w + 2.0)));
}

double hyperbolic_distance(PolarCoordinate a, PolarCoordinate b) {
  const double half = std::sin(angular_separation(a.theta, b.theta) / 2.0);
  const double dr = std::sinh((a.r - b.r) / 2.0);
  return distance_from_excess(2.0 * dr * dr + 2.0 * std::sinh(a.r) * std::sinh(b.r) * half * half);
}

double connection_probability(double x, double radius, double temperature) {
  check_parameters(radius, temperature);
  const double z = std::clamp((x - radius) / (2.0 * temperature), -kExpCap, kExpCap);
  return 1.0 / (1.0 + std::exp(z));
}

double pair_log_likelihood(double x, double radius, double temperature, bool linked, bool* saturated) {
  double z = (x - radius) / (2.0 * temperature);
  if (std::fabs(z) > kExpCap) {
    z = std::copysign(kExpCap, z);
    if (saturated) *saturated = true;
  }
  // ln p = -softplus(z), ln(1 - p) = -softplus(-z)
  return linked ? -softplus(z) : -softplus(-z);
}

double log_likelihood(const DomainNetwork& net, std::span<const PolarCoordinate> coords,
                      double radius, double temperature, LikelihoodDiagnostics* diag) {
  check_parameters(radius, temperature);
  const std::size_t n = net.size();
  if (coords.size() != n) throw DataError("coordinate count does not match the network");
  double total = 0.0;
  std::size_t saturated = 0;
  std::vector<char> linked(n, 0);
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId v : net.neighbors(i)) linked[v] = 1;
    double row = 0.0;
    for (NodeId j = i + 1; j < n; ++j) {
      bool sat = false;
      row += pair_log_likelihood(hyperbolic_distance(coords[i], coords[j]), radius, temperature,
                                 linked[j] != 0, &sat);
      saturated += sat ? 1 : 0;
    }
    for (NodeId v : net.neighbors(i)) linked[v] = 0;
    total += row;
  }
  if (diag) diag->saturated_pairs = saturated;
  return total;
}

std::optional<NodeId> Embedding::find(std::string_view label) const {
  if (index_.size() != labels.size()) {
    for (NodeId i = 0; i < labels.size(); ++i) {
      if (labels[i] == label) return i;
    }
    return std::nullopt;
  }
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void Embedding::reindex() {
  index_.clear();
  for (NodeId i = 0; i < labels.size(); ++i) index_.emplace(labels[i], i);
}

std::vector<PolarCoordinate> aligned_coordinates(const DomainNetwork& net, const Embedding& emb) {
  std::vector<PolarCoordinate> out(net.size());
  for (NodeId u = 0; u < net.size(); ++u) {
    auto i = emb.find(net.label(u));
    if (!i) throw DataError("node '" + net.label(u) + "' has no embedding coordinate");
    out[u] = emb.coords[*i];
  }
  return out;
}

}  // namespace webgeo
