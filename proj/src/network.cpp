#include "webgeo/network.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "webgeo/errors.hpp"

namespace webgeo {

std::string_view to_string(Level level) { return level == Level::tld1 ? "tld1" : "entity"; }

Level parse_level(std::string_view text) {
  if (text == "tld1") return Level::tld1;
  if (text == "entity") return Level::entity;
  throw ConfigError("unknown level '" + std::string(text) + "' (expected tld1 or entity)");
}

DomainNetwork DomainNetwork::from_labelled_edges(
    Level level, const std::map<std::pair<std::string, std::string>, std::size_t>& edges) {
  DomainNetwork net;
  net.level_ = level;
  std::set<std::string> labels;
  for (const auto& [e, count] : edges) {
    labels.insert(e.first);
    labels.insert(e.second);
  }
  net.labels_.assign(labels.begin(), labels.end());
  for (NodeId i = 0; i < net.labels_.size(); ++i) net.index_.emplace(net.labels_[i], i);
  net.adjacency_.resize(net.labels_.size());
  net.meta_.resize(net.labels_.size());
  for (const auto& [e, count] : edges) {
    if (e.first == e.second) continue;
    NodeId u = net.index_.at(e.first), v = net.index_.at(e.second);
    if (v < u) std::swap(u, v);
    auto [it, inserted] = net.provenance_.emplace(Edge{u, v}, 0);
    it->second += count;
    if (inserted) {
      net.adjacency_[u].push_back(v);
      net.adjacency_[v].push_back(u);
      ++net.edge_count_;
    }
  }
  for (auto& nb : net.adjacency_) std::sort(nb.begin(), nb.end());
  return net;
}

std::optional<NodeId> DomainNetwork::find(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool DomainNetwork::has_edge(NodeId u, NodeId v) const {
  const auto& nb = adjacency_[u];
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<DomainNetwork::Edge> DomainNetwork::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (NodeId u = 0; u < adjacency_.size(); ++u) {
    for (NodeId v : adjacency_[u]) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

std::size_t DomainNetwork::provenance(NodeId u, NodeId v) const {
  if (v < u) std::swap(u, v);
  auto it = provenance_.find({u, v});
  return it == provenance_.end() ? 0 : it->second;
}

DomainNetwork DomainNetwork::induced(std::span<const NodeId> nodes) const {
  std::map<std::pair<std::string, std::string>, std::size_t> edges;
  std::vector<char> keep(size(), 0);
  for (NodeId u : nodes) {
    keep[u] = 1;
    edges[{labels_[u], labels_[u]}] = 0;  // keeps isolated members
  }
  for (const auto& [e, count] : provenance_) {
    if (keep[e.first] && keep[e.second]) edges[{labels_[e.first], labels_[e.second]}] += count;
  }
  DomainNetwork sub = from_labelled_edges(level_, edges);
  for (NodeId u = 0; u < sub.size(); ++u) sub.meta_[u] = meta_[index_.at(sub.labels_[u])];
  return sub;
}

std::vector<std::size_t> DomainNetwork::components(std::size_t* count) const {
  constexpr auto unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> comp(size(), unset);
  std::size_t next = 0;
  std::vector<NodeId> stack;
  for (NodeId s = 0; s < size(); ++s) {
    if (comp[s] != unset) continue;
    comp[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      NodeId u = stack.back();
      stack.pop_back();
      for (NodeId v : adjacency_[u]) {
        if (comp[v] == unset) {
          comp[v] = next;
          stack.push_back(v);
        }
      }
    }
    ++next;
  }
  if (count) *count = next;
  return comp;
}

bool DomainNetwork::is_connected() const {
  std::size_t count = 0;
  components(&count);
  return count <= 1;
}

DomainNetwork DomainNetwork::largest_component() const {
  std::size_t count = 0;
  const auto comp = components(&count);
  if (count <= 1) {
    DomainNetwork copy = *this;
    copy.discarded_nodes_ = 0;
    return copy;
  }
  std::vector<std::size_t> sizes(count, 0);
  for (auto c : comp) ++sizes[c];
  // components are numbered by smallest member id, which is the smallest label
  const auto best = static_cast<std::size_t>(
      std::distance(sizes.begin(), std::max_element(sizes.begin(), sizes.end())));
  std::vector<NodeId> nodes;
  for (NodeId u = 0; u < size(); ++u) {
    if (comp[u] == best) nodes.push_back(u);
  }
  DomainNetwork sub = induced(nodes);
  sub.discarded_nodes_ = size() - nodes.size();
  return sub;
}

// ---------------------------------------------------------------------------

std::optional<QualifiedInteraction> qualify(const InteractionRecord& record, const Tld1Map& tld1_map) {
  auto fp = tld1_map.tld1(record.first_party);
  auto ref = tld1_map.tld1(record.referrer_domain);
  auto req = tld1_map.tld1(record.requested_domain);
  if (!fp || !ref || !req) return std::nullopt;
  if (*ref == *req || *ref == *fp || *req == *fp) return std::nullopt;
  return QualifiedInteraction{std::move(*fp), std::move(*ref), std::move(*req)};
}

std::string level_label(const std::string& tld1, Level level, const EntityMap& entity_map) {
  if (level == Level::tld1) return tld1;
  if (auto e = entity_map.entity_of(tld1)) return *e;
  return tld1;
}

DomainNetwork build_tld1_network(std::span<const InteractionRecord> records, const Tld1Map& tld1_map,
                                 const EntityMap& entity_map, BuildStats* stats) {
  std::map<std::pair<std::string, std::string>, std::size_t> edges;
  std::size_t qualifying = 0;
  for (const auto& r : records) {
    auto q = qualify(r, tld1_map);
    if (!q) continue;
    ++qualifying;
    auto key = q->referrer < q->requested ? std::make_pair(q->referrer, q->requested)
                                          : std::make_pair(q->requested, q->referrer);
    ++edges[key];
  }
  if (qualifying == 0) throw EmptyNetworkError("no record links two distinct third-party domains");
  DomainNetwork full = DomainNetwork::from_labelled_edges(Level::tld1, edges);
  for (NodeId u = 0; u < full.size(); ++u) {
    NodeMeta meta;
    if (const auto* rec = entity_map.find(full.label(u))) {
      meta.entity = rec->entity;
      if (!rec->activity.empty()) meta.activity = rec->activity;
    }
    full.set_meta(u, std::move(meta));
  }
  if (stats) {
    stats->records = records.size();
    stats->qualifying = qualifying;
    stats->nodes_before_component = full.size();
  }
  return full.largest_component();
}

DomainNetwork project_entity_network(const DomainNetwork& tld1_net, const EntityMap& entity_map) {
  std::vector<std::string> entity_of(tld1_net.size());
  for (NodeId u = 0; u < tld1_net.size(); ++u) {
    entity_of[u] = level_label(tld1_net.label(u), Level::entity, entity_map);
  }
  std::map<std::pair<std::string, std::string>, std::size_t> edges;
  for (auto [u, v] : tld1_net.edges()) {
    const auto& a = entity_of[u];
    const auto& b = entity_of[v];
    if (a == b) continue;
    edges[a < b ? std::make_pair(a, b) : std::make_pair(b, a)] += tld1_net.provenance(u, v);
  }
  for (const auto& e : entity_of) edges.emplace(std::make_pair(e, e), 0);
  DomainNetwork net = DomainNetwork::from_labelled_edges(Level::entity, edges);

  // Entity activity: most frequent known activity among its TLD+1s.
  std::map<std::string, std::map<std::string, std::size_t>> activities;
  for (NodeId u = 0; u < tld1_net.size(); ++u) {
    const auto& act = tld1_net.meta(u).activity;
    if (!act.empty() && act != kUnknown) ++activities[entity_of[u]][act];
  }
  for (NodeId u = 0; u < net.size(); ++u) {
    NodeMeta meta;
    meta.entity = net.label(u);
    if (auto it = activities.find(net.label(u)); it != activities.end()) {
      std::size_t best = 0;
      for (const auto& [act, n] : it->second) {
        if (n > best) {
          best = n;
          meta.activity = act;
        }
      }
    }
    net.set_meta(u, std::move(meta));
  }
  return net.largest_component();
}

void write_edge_list(std::ostream& out, const DomainNetwork& net, std::string_view preamble) {
  out << preamble;
  std::vector<std::pair<std::string, std::string>> lines;
  lines.reserve(net.edge_count());
  for (auto [u, v] : net.edges()) lines.emplace_back(net.label(u), net.label(v));
  std::sort(lines.begin(), lines.end());
  for (const auto& [a, b] : lines) out << a << '\t' << b << '\n';
}

DomainNetwork read_edge_list(std::istream& in, Level level) {
  std::map<std::pair<std::string, std::string>, std::size_t> edges;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw DataError("edge list line without tab: " + line);
    std::string a = line.substr(0, tab), b = line.substr(tab + 1);
    if (a == b) continue;
    if (b < a) std::swap(a, b);
    ++edges[{a, b}];
  }
  return DomainNetwork::from_labelled_edges(level, edges);
}

}  // namespace webgeo
