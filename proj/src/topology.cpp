#include "webgeo/topology.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <queue>

#include "webgeo/errors.hpp"
#include "webgeo/parallel.hpp"
#include "webgeo/powerlaw.hpp"

namespace webgeo {

namespace {

struct SourceSweep {
  std::vector<double> betweenness;
  std::vector<std::uint64_t> distance_counts;  // index = hop length
};

// Brandes accumulation for sources in [begin, end).
SourceSweep sweep_sources(const DomainNetwork& net, NodeId begin, NodeId end) {
  const std::size_t n = net.size();
  SourceSweep out;
  out.betweenness.assign(n, 0.0);
  std::vector<int> dist(n);
  std::vector<double> sigma(n), delta(n);
  std::vector<NodeId> order;
  order.reserve(n);
  std::vector<NodeId> queue(n);
  for (NodeId s = begin; s < end; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    order.clear();
    dist[s] = 0;
    sigma[s] = 1.0;
    std::size_t head = 0, tail = 0;
    queue[tail++] = s;
    while (head < tail) {
      NodeId u = queue[head++];
      order.push_back(u);
      for (NodeId v : net.neighbors(u)) {
        if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          queue[tail++] = v;
        }
        if (dist[v] == dist[u] + 1) sigma[v] += sigma[u];
      }
    }
    for (NodeId u : order) {
      if (u == s) continue;
      const auto l = static_cast<std::size_t>(dist[u]);
      if (out.distance_counts.size() <= l) out.distance_counts.resize(l + 1, 0);
      ++out.distance_counts[l];
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      NodeId w = *it;
      for (NodeId v : net.neighbors(w)) {
        if (dist[v] == dist[w] - 1) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      }
      if (w != s) out.betweenness[w] += delta[w];
    }
  }
  return out;
}

std::vector<SourceSweep> sweep_all(const DomainNetwork& net) {
  const std::size_t n = net.size();
  const std::size_t blocks = std::min<std::size_t>(n, 64);
  std::vector<SourceSweep> parts(blocks);
  parallel_blocks(blocks, [&](std::size_t b) {
    const auto begin = static_cast<NodeId>(n * b / blocks);
    const auto end = static_cast<NodeId>(n * (b + 1) / blocks);
    parts[b] = sweep_sources(net, begin, end);
  });
  return parts;
}

}  // namespace

std::vector<double> local_clustering(const DomainNetwork& net) {
  const std::size_t n = net.size();
  std::vector<double> c(n, 0.0);
  std::vector<char> mark(n, 0);
  for (NodeId u = 0; u < n; ++u) {
    const auto k = net.degree(u);
    if (k < 2) continue;
    for (NodeId v : net.neighbors(u)) mark[v] = 1;
    std::size_t links = 0;
    for (NodeId v : net.neighbors(u)) {
      for (NodeId w : net.neighbors(v)) {
        if (w > v && mark[w]) ++links;
      }
    }
    for (NodeId v : net.neighbors(u)) mark[v] = 0;
    c[u] = 2.0 * static_cast<double>(links) / (static_cast<double>(k) * static_cast<double>(k - 1));
  }
  return c;
}

double mean_clustering(const DomainNetwork& net) {
  if (net.empty()) return 0.0;
  const auto c = local_clustering(net);
  double sum = 0.0;
  for (double v : c) sum += v;
  return sum / static_cast<double>(c.size());
}

std::vector<int> bfs_distances(const DomainNetwork& net, NodeId source) {
  std::vector<int> dist(net.size(), -1);
  std::queue<NodeId> q;
  dist[source] = 0;
  q.push(source);
  while (!q.empty()) {
    NodeId u = q.front();
    q.pop();
    for (NodeId v : net.neighbors(u)) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        q.push(v);
      }
    }
  }
  return dist;
}

std::vector<double> betweenness(const DomainNetwork& net) {
  const std::size_t n = net.size();
  std::vector<double> bc(n, 0.0);
  if (n < 3) return bc;
  for (const auto& part : sweep_all(net)) {
    for (std::size_t i = 0; i < n; ++i) bc[i] += part.betweenness[i];
  }
  // every unordered pair is counted from both endpoints
  const double pairs = static_cast<double>(n - 1) * static_cast<double>(n - 2) / 2.0;
  for (double& v : bc) v = v / 2.0 / pairs;
  return bc;
}

TopologyProfile topology_profile(const DomainNetwork& net) {
  const std::size_t n = net.size();
  if (n < 2) throw DataError("topology profile needs at least two nodes");
  if (!net.is_connected()) throw DisconnectedError("take the largest component first");

  TopologyProfile p;
  p.n_nodes = n;
  p.n_edges = net.edge_count();
  p.mean_degree = 2.0 * static_cast<double>(p.n_edges) / static_cast<double>(n);

  std::vector<long> degrees(n);
  for (NodeId u = 0; u < n; ++u) degrees[u] = static_cast<long>(net.degree(u));
  p.max_degree = static_cast<std::size_t>(*std::max_element(degrees.begin(), degrees.end()));

  const auto clustering = local_clustering(net);
  double c_sum = 0.0;
  for (double c : clustering) c_sum += c;
  p.mean_clustering = c_sum / static_cast<double>(n);

  try {
    const auto fit = fit_powerlaw(degrees);
    p.gamma = fit.gamma;
    p.gamma_k_min = fit.k_min;
    p.gamma_reliable = true;
  } catch (const FitUnreliable& e) {
    p.gamma = e.gamma();
    p.gamma_k_min = e.k_min();
    p.gamma_reliable = false;
  }

  // distances and betweenness from one exact all-sources sweep
  std::vector<double> bc(n, 0.0);
  std::vector<std::uint64_t> dcounts;
  for (const auto& part : sweep_all(net)) {
    for (std::size_t i = 0; i < n; ++i) bc[i] += part.betweenness[i];
    if (dcounts.size() < part.distance_counts.size()) dcounts.resize(part.distance_counts.size(), 0);
    for (std::size_t l = 0; l < part.distance_counts.size(); ++l) dcounts[l] += part.distance_counts[l];
  }
  const double pair_norm =
      n > 2 ? static_cast<double>(n - 1) * static_cast<double>(n - 2) / 2.0 : 0.0;
  for (double& v : bc) v = pair_norm > 0.0 ? v / 2.0 / pair_norm : 0.0;

  std::uint64_t ordered_pairs = 0;
  double dist_sum = 0.0;
  for (std::size_t l = 1; l < dcounts.size(); ++l) {
    ordered_pairs += dcounts[l];
    dist_sum += static_cast<double>(l) * static_cast<double>(dcounts[l]);
  }
  p.mean_distance = dist_sum / static_cast<double>(ordered_pairs);
  p.max_distance = dcounts.empty() ? 0 : dcounts.size() - 1;
  for (std::size_t l = 1; l < dcounts.size(); ++l) {
    p.distance_distribution.push_back(
        {static_cast<double>(l), static_cast<double>(dcounts[l]) / static_cast<double>(ordered_pairs)});
  }

  struct ClassSums {
    std::size_t count = 0;
    double clustering = 0.0;
    double neighbor_degree = 0.0;
    double betweenness = 0.0;
  };
  std::map<long, ClassSums> classes;
  for (NodeId u = 0; u < n; ++u) {
    auto& cls = classes[degrees[u]];
    ++cls.count;
    cls.clustering += clustering[u];
    double knn = 0.0;
    for (NodeId v : net.neighbors(u)) knn += static_cast<double>(degrees[v]);
    cls.neighbor_degree += degrees[u] > 0 ? knn / static_cast<double>(degrees[u]) : 0.0;
    cls.betweenness += bc[u];
  }
  for (const auto& [k, cls] : classes) {
    const double cnt = static_cast<double>(cls.count);
    const double x = static_cast<double>(k);
    p.degree_distribution.push_back({x, cnt / static_cast<double>(n)});
    p.clustering_by_degree.push_back({x, cls.clustering / cnt});
    p.neighbor_degree_by_degree.push_back({x, cls.neighbor_degree / cnt});
    p.betweenness_by_degree.push_back({x, cls.betweenness / cnt});
  }
  return p;
}

}  // namespace webgeo
