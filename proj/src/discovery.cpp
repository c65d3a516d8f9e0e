#include "webgeo/discovery.hpp"

#include <algorithm>
#include <set>

#include "webgeo/csv.hpp"
#include "webgeo/errors.hpp"

namespace webgeo {

std::string contributor_value(const InteractionRecord& record, std::string_view key) {
  if (key == "country") return record.country;
  if (key == "first_party") return record.first_party;
  if (key == "request_type") return record.request_type;
  if (auto it = record.extra.find(std::string(key)); it != record.extra.end()) return it->second;
  throw ConfigError("contributor key '" + std::string(key) + "' is not a retained column");
}

DiscoveryCurve discovery_curve(std::span<const InteractionRecord> records,
                               std::string_view contributor_key, const Tld1Map& tld1_map) {
  using Link = std::pair<std::string, std::string>;
  struct Contribution {
    std::size_t interactions = 0;
    std::set<std::string> nodes;
    std::set<Link> links;
  };
  std::map<std::string, Contribution> by_contributor;
  std::set<std::string> all_nodes;
  std::set<Link> all_links;
  for (const auto& r : records) {
    const std::string who = contributor_value(r, contributor_key);
    auto q = qualify(r, tld1_map);
    if (!q) continue;
    auto& c = by_contributor[who];
    ++c.interactions;
    Link link = q->referrer < q->requested ? Link{q->referrer, q->requested}
                                           : Link{q->requested, q->referrer};
    c.nodes.insert(q->referrer);
    c.nodes.insert(q->requested);
    all_nodes.insert(q->referrer);
    all_nodes.insert(q->requested);
    all_links.insert(link);
    c.links.insert(std::move(link));
  }
  if (all_links.empty()) throw EmptyNetworkError("no qualifying interaction for the discovery curve");

  std::vector<const std::pair<const std::string, Contribution>*> order;
  for (const auto& entry : by_contributor) order.push_back(&entry);
  std::stable_sort(order.begin(), order.end(), [](auto* a, auto* b) {
    return a->second.interactions > b->second.interactions;
  });

  DiscoveryCurve curve;
  std::set<std::string> seen_nodes;
  std::set<Link> seen_links;
  for (const auto* entry : order) {
    seen_nodes.insert(entry->second.nodes.begin(), entry->second.nodes.end());
    seen_links.insert(entry->second.links.begin(), entry->second.links.end());
    curve.contributors.push_back(entry->first);
    curve.nodes.push_back(static_cast<double>(seen_nodes.size()) / static_cast<double>(all_nodes.size()));
    curve.links.push_back(static_cast<double>(seen_links.size()) / static_cast<double>(all_links.size()));
  }
  return curve;
}

RegionMap load_region_map(std::istream& in, char delim) {
  RegionMap map;
  csv::Reader reader(in, delim);
  if (!reader.has_header()) return map;
  const auto c_country = reader.require({"country"}, "country");
  const auto c_region = reader.require({"region", "continent"}, "region");
  std::vector<std::string> row;
  while (reader.next(row)) {
    if (row.size() <= std::max(c_country, c_region)) continue;
    auto [it, inserted] = map.emplace(row[c_country], row[c_region]);
    if (!inserted && it->second != row[c_region]) {
      throw ConflictError(row[c_country], "assigned to regions '" + it->second + "' and '" +
                                              row[c_region] + "'");
    }
  }
  return map;
}

RegionalOverlap regional_overlap(std::span<const InteractionRecord> records,
                                 const RegionMap& country_to_region, const Tld1Map& tld1_map,
                                 const EntityMap& entity_map) {
  RegionalOverlap out;
  std::map<std::string, std::vector<InteractionRecord>> by_region;
  for (const auto& r : records) {
    auto it = country_to_region.find(r.country);
    if (it == country_to_region.end()) {
      ++out.unmapped_records;
      continue;
    }
    by_region[it->second].push_back(r);
  }
  std::vector<std::set<std::string>> node_sets;
  std::vector<std::set<std::pair<std::string, std::string>>> link_sets;
  for (const auto& [region, recs] : by_region) {
    DomainNetwork net;
    try {
      net = build_tld1_network(recs, tld1_map, entity_map);
    } catch (const EmptyNetworkError&) {
      out.warnings.push_back("region " + region + " has no qualifying interaction; omitted");
      continue;
    }
    std::set<std::string> nodes(net.labels().begin(), net.labels().end());
    std::set<std::pair<std::string, std::string>> links;
    for (auto [u, v] : net.edges()) links.emplace(net.label(u), net.label(v));
    out.regions.push_back(region);
    out.networks.push_back(std::move(net));
    node_sets.push_back(std::move(nodes));
    link_sets.push_back(std::move(links));
  }
  auto overlap = [](const auto& sets) {
    const std::size_t m = sets.size();
    std::vector<std::vector<double>> mat(m, std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        std::size_t common = 0;
        for (const auto& x : sets[i]) common += sets[j].count(x);
        mat[i][j] = sets[i].empty() ? 0.0
                                    : static_cast<double>(common) / static_cast<double>(sets[i].size());
      }
    }
    return mat;
  };
  out.node_overlap = overlap(node_sets);
  out.link_overlap = overlap(link_sets);
  return out;
}

}  // namespace webgeo
