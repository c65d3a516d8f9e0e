#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "webgeo/ingest.hpp"

namespace webgeo {

using NodeId = std::uint32_t;

enum class Level { tld1, entity };

std::string_view to_string(Level level);
Level parse_level(std::string_view text);

inline constexpr std::string_view kUnknown = "unknown";

struct NodeMeta {
  std::string entity{kUnknown};
  std::string activity{kUnknown};
};

// Simple undirected labelled graph. Node ids follow the lexicographic order of
// the labels, and neighbor lists are sorted, so every derived quantity is
// independent of input order.
class DomainNetwork {
 public:
  using Edge = std::pair<NodeId, NodeId>;

  DomainNetwork() = default;

  // Builds from label pairs with an observation count each. A self-pair only
  // declares its node (no loop); repeated pairs in either orientation merge.
  static DomainNetwork from_labelled_edges(
      Level level, const std::map<std::pair<std::string, std::string>, std::size_t>& edges);

  Level level() const { return level_; }
  std::size_t size() const { return labels_.size(); }
  std::size_t edge_count() const { return edge_count_; }
  bool empty() const { return labels_.empty(); }

  const std::string& label(NodeId u) const { return labels_[u]; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<NodeId> find(std::string_view label) const;

  std::span<const NodeId> neighbors(NodeId u) const { return adjacency_[u]; }
  std::size_t degree(NodeId u) const { return adjacency_[u].size(); }
  bool has_edge(NodeId u, NodeId v) const;
  std::vector<Edge> edges() const;  // u < v, ascending

  const NodeMeta& meta(NodeId u) const { return meta_[u]; }
  void set_meta(NodeId u, NodeMeta meta) { meta_[u] = std::move(meta); }

  // Number of raw interactions collapsed into the edge (diagnostics only).
  std::size_t provenance(NodeId u, NodeId v) const;

  // Induced subgraph on the given nodes; metadata and provenance carried over.
  DomainNetwork induced(std::span<const NodeId> nodes) const;

  // Connected component labels (0-based, numbered by smallest member id).
  std::vector<std::size_t> components(std::size_t* count = nullptr) const;
  bool is_connected() const;

  // Largest connected component; ties go to the component holding the
  // lexicographically smallest label. discarded_nodes() records the rest.
  DomainNetwork largest_component() const;
  std::size_t discarded_nodes() const { return discarded_nodes_; }

 private:
  Level level_ = Level::tld1;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId> index_;
  std::vector<std::vector<NodeId>> adjacency_;
  std::vector<NodeMeta> meta_;
  std::map<Edge, std::size_t> provenance_;
  std::size_t edge_count_ = 0;
  std::size_t discarded_nodes_ = 0;
};

// The TLD+1 pair a record contributes, or nullopt when it does not qualify:
// all three domains must map to a TLD+1 and referrer, requested and first
// party must be pairwise distinct at that level.
struct QualifiedInteraction {
  std::string first_party;
  std::string referrer;
  std::string requested;
};
std::optional<QualifiedInteraction> qualify(const InteractionRecord& record, const Tld1Map& tld1_map);

// TLD+1 -> node label at the requested level. Unknown TLD+1s become singleton
// entities named after themselves.
std::string level_label(const std::string& tld1, Level level, const EntityMap& entity_map);

struct BuildStats {
  std::size_t records = 0;
  std::size_t qualifying = 0;
  std::size_t nodes_before_component = 0;
};

// TLD+1 network: an edge per pair of TLD+1s interacting at least once (either
// direction). Returns the largest connected component; throws
// EmptyNetworkError when no record qualifies.
DomainNetwork build_tld1_network(std::span<const InteractionRecord> records, const Tld1Map& tld1_map,
                                 const EntityMap& entity_map, BuildStats* stats = nullptr);

// One node per legal entity; entities are adjacent iff some TLD+1 edge crosses
// them. Intra-entity edges vanish. Returns the largest connected component.
DomainNetwork project_entity_network(const DomainNetwork& tld1_net, const EntityMap& entity_map);

// "u<TAB>v" per edge, u < v, sorted lexicographically. Lines before the edges
// given in `preamble` are written verbatim (each should start with '#').
void write_edge_list(std::ostream& out, const DomainNetwork& net, std::string_view preamble = {});
DomainNetwork read_edge_list(std::istream& in, Level level);

}  // namespace webgeo
