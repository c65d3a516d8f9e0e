#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "webgeo/hyperbolic.hpp"
#include "webgeo/ingest.hpp"
#include "webgeo/network.hpp"

namespace webgeo {

struct InteractionPath {
  std::vector<std::string> nodes;  // source first
  std::string first_party;         // witness page visit
  std::int64_t timestamp = 0;      // of the first hop
  std::size_t hops() const { return nodes.size() - 1; }
};

struct PathOptions {
  Level level = Level::tld1;
  std::int64_t window_gap = 60;         // seconds of inactivity closing a page visit
  std::size_t max_chains_per_window = 10000;
};

struct PathExtraction {
  std::vector<InteractionPath> paths;  // every maximal chain occurrence
  std::size_t distinct = 0;            // distinct node sequences
  std::size_t windows = 0;
  std::size_t truncated_windows = 0;   // hit max_chains_per_window
};

// Referrer chains per page visit. Qualifying records are grouped by first
// party, ordered by (timestamp, referrer label, requested label) and split
// where consecutive timestamps differ by more than window_gap. Within a
// window, label-level self-transitions are dropped and a repeated
// (referrer, requested) pair keeps its first occurrence. A chain is a sequence
// of window records in order, each one's referrer equal to the previous one's
// requested label, visiting no label twice; chains that can be neither
// extended nor prepended are emitted.
PathExtraction extract_interaction_paths(std::span<const InteractionRecord> records, const Tld1Map& tld1_map,
                                         const EntityMap& entity_map, const PathOptions& options = {});

struct PathProfile {
  std::map<std::size_t, double> hop_distribution;  // l -> fraction of kept paths
  double shortest_fraction = 0.0;
  double mean_hops = 0.0;
  std::size_t max_hops = 0;
  std::size_t kept = 0;
  std::size_t dropped = 0;  // an endpoint is not in the network
};

PathProfile path_profile(std::span<const InteractionPath> paths, const DomainNetwork& net);

struct RouteResult {
  bool delivered = false;
  bool budget_exhausted = false;  // dropped by the N-hop guard rather than a loop
  std::vector<NodeId> path;       // visited nodes, source first
  std::size_t hops() const { return path.empty() ? 0 : path.size() - 1; }
};

// Greedy forwarding to the neighbor closest to dest (lowest id on ties); the
// packet is dropped when the chosen neighbor is the node it just came from.
// coords are indexed by network node id.
RouteResult greedy_route(const DomainNetwork& net, std::span<const PolarCoordinate> coords, NodeId source,
                         NodeId dest);

struct PairSelection {
  std::optional<std::size_t> sample;  // all ordered pairs when empty
  std::uint64_t seed = 0;
};

struct RouteOutcome {
  NodeId source = 0;
  NodeId dest = 0;
  bool delivered = false;
  bool budget_exhausted = false;
  std::size_t greedy_hops = 0;
  std::size_t shortest_hops = 0;
  double stretch = 0.0;  // delivered pairs only
};

struct NavigabilityReport {
  double success_ratio = 0.0;
  double mean_stretch = 0.0;
  double max_stretch = 0.0;
  std::size_t evaluated_pairs = 0;
  std::size_t delivered = 0;
  std::size_t budget_exhausted = 0;
  std::vector<RouteOutcome> outcomes;
};

NavigabilityReport navigability_report(const DomainNetwork& net, const Embedding& emb,
                                       const PairSelection& selection = {});

void write_route_csv(std::ostream& out, const DomainNetwork& net, const NavigabilityReport& report);
void write_path_profile_csv(std::ostream& out, const PathProfile& profile);

}  // namespace webgeo
