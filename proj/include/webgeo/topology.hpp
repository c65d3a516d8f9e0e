#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "webgeo/network.hpp"

namespace webgeo {

struct CurvePoint {
  double x = 0.0;
  double y = 0.0;
};

struct TopologyProfile {
  std::size_t n_nodes = 0;
  std::size_t n_edges = 0;
  double mean_degree = 0.0;
  std::size_t max_degree = 0;
  double mean_clustering = 0.0;
  // Power-law tail; gamma_reliable is false when the fit raised FitUnreliable
  // (gamma then holds the best-effort estimate, or is empty).
  std::optional<double> gamma;
  long gamma_k_min = 0;
  bool gamma_reliable = false;
  double mean_distance = 0.0;
  std::size_t max_distance = 0;

  std::vector<CurvePoint> degree_distribution;    // k, P(k)
  std::vector<CurvePoint> clustering_by_degree;   // k, c(k)
  std::vector<CurvePoint> neighbor_degree_by_degree;  // k, k_nn(k)
  std::vector<CurvePoint> distance_distribution;  // l, d(l)
  std::vector<CurvePoint> betweenness_by_degree;  // k, B(k)
};

// Local clustering per node; nodes of degree < 2 have clustering 0 and are
// included in the network mean.
std::vector<double> local_clustering(const DomainNetwork& net);
double mean_clustering(const DomainNetwork& net);

// Hop distances from source; -1 for unreachable nodes.
std::vector<int> bfs_distances(const DomainNetwork& net, NodeId source);

// Exact shortest-path betweenness (Brandes), each node normalized by the
// number of unordered pairs of other nodes, (N-1)(N-2)/2.
std::vector<double> betweenness(const DomainNetwork& net);

// Every statistic of the network, computed exactly. Throws DisconnectedError
// on a disconnected input and DataError when N < 2.
TopologyProfile topology_profile(const DomainNetwork& net);

}  // namespace webgeo
