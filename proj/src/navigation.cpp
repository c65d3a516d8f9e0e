#include "webgeo/navigation.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <set>
#include <tuple>

#include "webgeo/csv.hpp"
#include "webgeo/errors.hpp"
#include "webgeo/parallel.hpp"
#include "webgeo/topology.hpp"

namespace webgeo {

namespace {

constexpr std::size_t kRouteBlocks = 64;

struct Hop {
  std::int64_t timestamp;
  std::string ref;
  std::string req;
};

// Chains of one window, by depth-first extension from every start record.
void window_chains(const std::vector<Hop>& hops, const std::string& first_party, const PathOptions& options,
                   PathExtraction& out) {
  const std::size_t m = hops.size();
  std::size_t emitted = 0;
  bool truncated = false;
  std::vector<std::size_t> chain;
  std::vector<std::string> labels;

  auto in_chain = [&](const std::string& label) {
    return std::find(labels.begin(), labels.end(), label) != labels.end();
  };
  auto prependable = [&]() {
    const std::size_t first = chain.front();
    for (std::size_t r = 0; r < first; ++r) {
      if (hops[r].req == labels.front() && !in_chain(hops[r].ref)) return true;
    }
    return false;
  };

  std::function<void()> extend = [&]() {
    if (truncated) return;
    bool extended = false;
    for (std::size_t j = chain.back() + 1; j < m; ++j) {
      if (hops[j].ref != labels.back() || in_chain(hops[j].req)) continue;
      extended = true;
      chain.push_back(j);
      labels.push_back(hops[j].req);
      extend();
      chain.pop_back();
      labels.pop_back();
      if (truncated) return;
    }
    if (extended || prependable()) return;
    if (emitted == options.max_chains_per_window) {
      truncated = true;
      return;
    }
    ++emitted;
    out.paths.push_back({labels, first_party, hops[chain.front()].timestamp});
  };

  for (std::size_t s = 0; s < m && !truncated; ++s) {
    chain = {s};
    labels = {hops[s].ref, hops[s].req};
    extend();
  }
  if (truncated) ++out.truncated_windows;
}

}  // namespace

PathExtraction extract_interaction_paths(std::span<const InteractionRecord> records, const Tld1Map& tld1_map,
                                         const EntityMap& entity_map, const PathOptions& options) {
  if (options.window_gap < 0) throw ParameterError("window gap must be non-negative");
  // first party -> (timestamp, ref, req)
  std::map<std::string, std::vector<Hop>> visits;
  for (const auto& rec : records) {
    auto q = qualify(rec, tld1_map);
    if (!q) continue;
    std::string ref = level_label(q->referrer, options.level, entity_map);
    std::string req = level_label(q->requested, options.level, entity_map);
    visits[q->first_party].push_back({rec.timestamp, std::move(ref), std::move(req)});
  }

  PathExtraction out;
  for (auto& [fp, hops] : visits) {
    std::sort(hops.begin(), hops.end(), [](const Hop& a, const Hop& b) {
      return std::tie(a.timestamp, a.ref, a.req) < std::tie(b.timestamp, b.ref, b.req);
    });
    std::size_t begin = 0;
    while (begin < hops.size()) {
      std::size_t end = begin + 1;
      while (end < hops.size() && hops[end].timestamp - hops[end - 1].timestamp <= options.window_gap) ++end;
      std::vector<Hop> window;
      std::set<std::pair<std::string, std::string>> seen;
      for (std::size_t i = begin; i < end; ++i) {
        if (hops[i].ref == hops[i].req) continue;
        if (!seen.insert({hops[i].ref, hops[i].req}).second) continue;
        window.push_back(hops[i]);
      }
      ++out.windows;
      window_chains(window, fp, options, out);
      begin = end;
    }
  }
  std::set<std::vector<std::string>> distinct;
  for (const auto& p : out.paths) distinct.insert(p.nodes);
  out.distinct = distinct.size();
  return out;
}

PathProfile path_profile(std::span<const InteractionPath> paths, const DomainNetwork& net) {
  PathProfile prof;
  std::map<NodeId, std::vector<int>> bfs_cache;
  std::map<std::size_t, std::size_t> counts;
  std::size_t shortest = 0, total_hops = 0;
  for (const auto& p : paths) {
    if (p.nodes.size() < 2) continue;
    auto s = net.find(p.nodes.front());
    auto d = net.find(p.nodes.back());
    if (!s || !d) {
      ++prof.dropped;
      continue;
    }
    auto it = bfs_cache.find(*s);
    if (it == bfs_cache.end()) it = bfs_cache.emplace(*s, bfs_distances(net, *s)).first;
    const std::size_t l = p.hops();
    ++counts[l];
    ++prof.kept;
    total_hops += l;
    prof.max_hops = std::max(prof.max_hops, l);
    if (it->second[*d] >= 0 && static_cast<std::size_t>(it->second[*d]) == l) ++shortest;
  }
  if (prof.kept > 0) {
    const double kept = static_cast<double>(prof.kept);
    for (auto [l, c] : counts) prof.hop_distribution[l] = static_cast<double>(c) / kept;
    prof.shortest_fraction = static_cast<double>(shortest) / kept;
    prof.mean_hops = static_cast<double>(total_hops) / kept;
  }
  return prof;
}

RouteResult greedy_route(const DomainNetwork& net, std::span<const PolarCoordinate> coords, NodeId source,
                         NodeId dest) {
  const std::size_t n = net.size();
  if (coords.size() != n) throw DataError("coordinate count does not match the network");
  if (source >= n || dest >= n) throw DataError("route endpoint out of range");
  if (source == dest) throw ParameterError("greedy route needs distinct endpoints");
  RouteResult res;
  res.path.push_back(source);
  NodeId current = source;
  std::optional<NodeId> previous;
  const PolarCoordinate target = coords[dest];
  while (current != dest) {
    if (res.path.size() > n) {
      res.budget_exhausted = true;
      return res;
    }
    std::optional<NodeId> next;
    double best = 0.0;
    for (NodeId v : net.neighbors(current)) {
      if (v == dest) {
        next = v;
        break;
      }
      const double c = hyperbolic_cosh_distance(coords[v], target);
      if (!next || c < best) {
        next = v;
        best = c;
      }
    }
    if (!next || (previous && *next == *previous)) return res;
    previous = current;
    current = *next;
    res.path.push_back(current);
  }
  res.delivered = true;
  return res;
}

NavigabilityReport navigability_report(const DomainNetwork& net, const Embedding& emb,
                                       const PairSelection& selection) {
  const std::size_t n = net.size();
  const auto coords = aligned_coordinates(net, emb);
  NavigabilityReport rep;
  if (n < 2) return rep;

  std::vector<std::pair<NodeId, NodeId>> pairs;
  if (selection.sample) {
    std::mt19937_64 rng(selection.seed);
    std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(n - 1));
    pairs.reserve(*selection.sample);
    while (pairs.size() < *selection.sample) {
      const NodeId s = pick(rng), d = pick(rng);
      if (s != d) pairs.emplace_back(s, d);
    }
    std::stable_sort(pairs.begin(), pairs.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
  } else {
    pairs.reserve(n * (n - 1));
    for (NodeId s = 0; s < n; ++s) {
      for (NodeId d = 0; d < n; ++d) {
        if (s != d) pairs.emplace_back(s, d);
      }
    }
  }

  rep.outcomes.resize(pairs.size());
  const std::size_t per_block = (pairs.size() + kRouteBlocks - 1) / kRouteBlocks;
  parallel_blocks(kRouteBlocks, [&](std::size_t blk) {
    const std::size_t lo = blk * per_block;
    const std::size_t hi = std::min(pairs.size(), lo + per_block);
    std::optional<NodeId> bfs_source;
    std::vector<int> dist;
    for (std::size_t k = lo; k < hi; ++k) {
      auto [s, d] = pairs[k];
      if (bfs_source != s) {
        dist = bfs_distances(net, s);
        bfs_source = s;
      }
      const auto route = greedy_route(net, coords, s, d);
      RouteOutcome& o = rep.outcomes[k];
      o.source = s;
      o.dest = d;
      o.delivered = route.delivered;
      o.budget_exhausted = route.budget_exhausted;
      o.greedy_hops = route.hops();
      o.shortest_hops = dist[d] < 0 ? 0 : static_cast<std::size_t>(dist[d]);
      if (route.delivered && o.shortest_hops > 0) {
        o.stretch = static_cast<double>(o.greedy_hops) / static_cast<double>(o.shortest_hops);
      }
    }
  });

  rep.evaluated_pairs = pairs.size();
  double stretch_sum = 0.0;
  for (const auto& o : rep.outcomes) {
    if (o.budget_exhausted) ++rep.budget_exhausted;
    if (!o.delivered) continue;
    ++rep.delivered;
    stretch_sum += o.stretch;
    rep.max_stretch = std::max(rep.max_stretch, o.stretch);
  }
  if (rep.evaluated_pairs > 0) {
    rep.success_ratio = static_cast<double>(rep.delivered) / static_cast<double>(rep.evaluated_pairs);
  }
  if (rep.delivered > 0) rep.mean_stretch = stretch_sum / static_cast<double>(rep.delivered);
  return rep;
}

void write_route_csv(std::ostream& out, const DomainNetwork& net, const NavigabilityReport& report) {
  out << "# p_s=" << csv::number(report.success_ratio) << " mean_stretch=" << csv::number(report.mean_stretch)
      << " max_stretch=" << csv::number(report.max_stretch) << " evaluated_pairs=" << report.evaluated_pairs
      << " delivered=" << report.delivered << " budget_exhausted=" << report.budget_exhausted << '\n';
  out << "source,dest,outcome,greedy_hops,shortest_hops,stretch\n";
  for (const auto& o : report.outcomes) {
    out << csv::quote(net.label(o.source), ',') << ',' << csv::quote(net.label(o.dest), ',') << ','
        << (o.delivered ? "success" : (o.budget_exhausted ? "budget" : "loop")) << ',' << o.greedy_hops << ','
        << o.shortest_hops << ',' << (o.delivered ? csv::number(o.stretch) : std::string()) << '\n';
  }
}

void write_path_profile_csv(std::ostream& out, const PathProfile& profile) {
  out << "# paths=" << profile.kept << " dropped=" << profile.dropped
      << " mean_hops=" << csv::number(profile.mean_hops) << " max_hops=" << profile.max_hops
      << " shortest_fraction=" << csv::number(profile.shortest_fraction) << '\n';
  out << "l,probability\n";
  for (auto [l, p] : profile.hop_distribution) out << l << ',' << csv::number(p) << '\n';
}

}  // namespace webgeo
