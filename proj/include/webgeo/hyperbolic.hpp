#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "webgeo/network.hpp"

namespace webgeo {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

struct PolarCoordinate {
  double r = 0.0;
  double theta = 0.0;  // [0, 2π)
};

double wrap_angle(double theta);

// π - |π - |a - b||, in [0, π].
double angular_separation(double a, double b);

// Hyperbolic law of cosines, evaluated through the excess
// cosh x - 1 = 2 sinh²((ra - rb)/2) + 2 sinh ra sinh rb sin²(Δθ/2),
// a sum of non-negative terms, so nearby points keep full precision.
double hyperbolic_distance(PolarCoordinate a, PolarCoordinate b);
// acosh(1 + w), accurate for small w
double distance_from_excess(double w);

// cosh of the distance; monotone in the distance, cheaper for comparisons.
double hyperbolic_cosh_distance(PolarCoordinate a, PolarCoordinate b);

// Fermi-Dirac connection probability 1 / (1 + exp((x - R) / 2T)).
// Throws ParameterError unless 0 < T < 1 and R > 0.
double connection_probability(double x, double radius, double temperature);

// Log-domain pair term: ln p(x) when linked, ln(1 - p(x)) otherwise.
// |x - R| / 2T is capped at 700; *saturated is set when the cap applied.
double pair_log_likelihood(double x, double radius, double temperature, bool linked,
                           bool* saturated = nullptr);

struct LikelihoodDiagnostics {
  std::size_t saturated_pairs = 0;
};

// Sum over unordered pairs of ln p(x_ij) for links and ln(1 - p(x_ij)) for
// non-links; coords are indexed by network node id.
double log_likelihood(const DomainNetwork& net, std::span<const PolarCoordinate> coords,
                      double radius, double temperature, LikelihoodDiagnostics* diag = nullptr);

// Node coordinates in the hyperbolic disk together with the model parameters
// and the per-node data exported for analysis and rendering.
struct Embedding {
  Level level = Level::tld1;
  std::vector<std::string> labels;
  std::vector<PolarCoordinate> coords;
  std::vector<std::size_t> degrees;
  std::vector<NodeMeta> meta;
  double radius = 0.0;
  double temperature = 0.5;
  double log_likelihood = 0.0;
  std::uint64_t seed = 0;
  double gamma = 0.0;
  bool converged = true;

  std::size_t size() const { return labels.size(); }
  std::optional<NodeId> find(std::string_view label) const;
  double distance(NodeId i, NodeId j) const { return hyperbolic_distance(coords[i], coords[j]); }

  // Builds the label index; call after filling labels.
  void reindex();

 private:
  std::unordered_map<std::string, NodeId> index_;
};

// Coordinates of `emb` reordered to the node ids of `net`. Throws DataError
// when a network node is missing from the embedding.
std::vector<PolarCoordinate> aligned_coordinates(const DomainNetwork& net, const Embedding& emb);

}  // namespace webgeo
