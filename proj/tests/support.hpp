#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "webgeo/ingest.hpp"
#include "webgeo/network.hpp"

namespace testing {

inline std::string data_path(const std::string& name) { return std::string(WEBGEO_TEST_DATA) + "/" + name; }

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline webgeo::InteractionRecord rec(std::int64_t ts, std::string fp, std::string ref, std::string req,
                                     std::string ip = "", std::string country = "US") {
  webgeo::InteractionRecord r;
  r.timestamp = ts;
  r.first_party = std::move(fp);
  r.country = std::move(country);
  r.referrer_domain = std::move(ref);
  r.requested_domain = std::move(req);
  r.request_type = "script";
  if (!ip.empty()) r.server_ip = std::move(ip);
  return r;
}

inline webgeo::DomainNetwork graph(const std::vector<std::pair<std::string, std::string>>& edges,
                                   webgeo::Level level = webgeo::Level::tld1) {
  std::map<std::pair<std::string, std::string>, std::size_t> m;
  for (const auto& e : edges) m[e] += 1;
  return webgeo::DomainNetwork::from_labelled_edges(level, m);
}

// Labels "v0".."v{n-1}" zero padded to keep lexicographic == numeric order.
inline std::string vlabel(std::size_t i) {
  std::string d = std::to_string(i);
  return "v" + std::string(d.size() < 3 ? 3 - d.size() : 0, '0') + d;
}

inline webgeo::Tld1Map psl() { return webgeo::Tld1Map(webgeo::PublicSuffixRules::load(std::string(WEBGEO_TEST_DATA) + "/../../data/public_suffix_list.dat")); }

}  // namespace testing
