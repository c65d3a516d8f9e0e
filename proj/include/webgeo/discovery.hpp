#pragma once

#include <istream>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "webgeo/network.hpp"

namespace webgeo {

// Field of a record used to attribute it to a contributor: "country",
// "first_party", "request_type", or any column retained via
// ColumnSchema::keep_columns. Throws ConfigError for anything else.
std::string contributor_value(const InteractionRecord& record, std::string_view key);

struct DiscoveryCurve {
  std::vector<std::string> contributors;  // in processing order
  std::vector<double> nodes;              // cumulative fraction of TLD+1 nodes seen
  std::vector<double> links;              // cumulative fraction of TLD+1 links seen
};

// Contributors sorted by descending number of qualifying interactions (ties by
// key); after each one the fraction of all TLD+1 nodes/links discovered so far.
// Fractions are relative to every qualifying interaction, so both series end
// at exactly 1.
DiscoveryCurve discovery_curve(std::span<const InteractionRecord> records,
                               std::string_view contributor_key, const Tld1Map& tld1_map);

using RegionMap = std::map<std::string, std::string>;  // country -> region

RegionMap load_region_map(std::istream& in, char delim = ',');

struct RegionalOverlap {
  std::vector<std::string> regions;  // sorted
  std::vector<DomainNetwork> networks;
  // overlap[i][j] = |V_i ∩ V_j| / |V_i| (rows normalized, not symmetric)
  std::vector<std::vector<double>> node_overlap;
  std::vector<std::vector<double>> link_overlap;
  std::size_t unmapped_records = 0;
  std::vector<std::string> warnings;
};

RegionalOverlap regional_overlap(std::span<const InteractionRecord> records,
                                 const RegionMap& country_to_region, const Tld1Map& tld1_map,
                                 const EntityMap& entity_map);

}  // namespace webgeo
