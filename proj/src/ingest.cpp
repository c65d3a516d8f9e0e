#include "webgeo/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>

#include "webgeo/csv.hpp"
#include "webgeo/errors.hpp"

namespace webgeo {

namespace {

std::optional<std::int64_t> parse_timestamp(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    auto frac = s.substr(dot + 1);
    if (!std::all_of(frac.begin(), frac.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      return std::nullopt;
    }
    s = s.substr(0, dot);
  }
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

bool usable_domain(const std::string& d) {
  return !d.empty() && (is_valid_hostname(d) || normalize_ip(d).has_value());
}

std::string trimmed(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

}  // namespace

ParseResult parse_interactions(std::istream& in, const ColumnSchema& schema) {
  ParseResult result;
  csv::Reader reader(in, schema.delimiter);
  if (!reader.has_header()) return result;

  const std::size_t c_ts = reader.require({schema.timestamp}, schema.timestamp);
  const std::size_t c_fp = reader.require({schema.first_party}, schema.first_party);
  const std::size_t c_cc = reader.require({schema.country}, schema.country);
  const std::size_t c_ref = reader.require({schema.referrer}, schema.referrer);
  const std::size_t c_req = reader.require({schema.requested}, schema.requested);
  const std::size_t c_type = reader.require({schema.request_type}, schema.request_type);
  const std::size_t c_ip = reader.require({schema.server_ip}, schema.server_ip);
  std::vector<std::pair<std::string, std::size_t>> extras;
  for (const auto& name : schema.keep_columns) {
    extras.emplace_back(name, reader.require({name}, name));
  }
  std::size_t width = std::max({c_ts, c_fp, c_cc, c_ref, c_req, c_type, c_ip});
  for (const auto& e : extras) width = std::max(width, e.second);

  std::vector<std::string> row;
  while (reader.next(row)) {
    auto reject = [&] {
      ++result.malformed;
      result.malformed_lines.push_back(reader.line_number());
    };
    if (row.size() <= width) {
      reject();
      continue;
    }
    InteractionRecord rec;
    auto ts = parse_timestamp(row[c_ts]);
    if (!ts || *ts <= 0) {
      reject();
      continue;
    }
    rec.timestamp = *ts;
    rec.first_party = normalize_domain(row[c_fp]);
    rec.referrer_domain = normalize_domain(row[c_ref]);
    rec.requested_domain = normalize_domain(row[c_req]);
    if (!usable_domain(rec.first_party) || !usable_domain(rec.referrer_domain) ||
        !usable_domain(rec.requested_domain)) {
      reject();
      continue;
    }
    rec.country = trimmed(row[c_cc]);
    rec.request_type = trimmed(row[c_type]);
    if (auto ip_field = trimmed(row[c_ip]); !ip_field.empty()) {
      rec.server_ip = normalize_ip(ip_field);
      if (!rec.server_ip) ++result.invalid_ip;
    }
    for (const auto& [name, idx] : extras) rec.extra[name] = row[idx];
    result.records.push_back(std::move(rec));
  }
  return result;
}

void write_interactions(std::ostream& out, std::span<const InteractionRecord> records,
                        const ColumnSchema& schema) {
  std::vector<std::string> header{schema.timestamp, schema.first_party, schema.country,
                                  schema.referrer,  schema.requested,   schema.request_type,
                                  schema.server_ip};
  header.insert(header.end(), schema.keep_columns.begin(), schema.keep_columns.end());
  csv::write_row(out, header, schema.delimiter);
  for (const auto& r : records) {
    std::vector<std::string> row{std::to_string(r.timestamp), r.first_party,      r.country,
                                 r.referrer_domain,            r.requested_domain, r.request_type,
                                 r.server_ip.value_or("")};
    for (const auto& name : schema.keep_columns) {
      auto it = r.extra.find(name);
      row.push_back(it == r.extra.end() ? std::string() : it->second);
    }
    csv::write_row(out, row, schema.delimiter);
  }
}

// ---------------------------------------------------------------------------

void Tld1Map::add_explicit(const std::string& fqdn, const std::string& tld1) {
  explicit_[normalize_domain(fqdn)] = normalize_domain(tld1);
}

Tld1Map Tld1Map::load_fqdn_table(std::istream& in, char delim,
                                 std::optional<PublicSuffixRules> rules) {
  Tld1Map map;
  map.rules_ = std::move(rules);
  csv::Reader reader(in, delim);
  if (!reader.has_header()) return map;
  const auto c_fqdn = reader.require({"fqdn", "domain"}, "fqdn");
  const auto c_tld1 = reader.require({"tld1", "tld+1", "tldplus1"}, "tld1");
  std::vector<std::string> row;
  while (reader.next(row)) {
    if (row.size() <= std::max(c_fqdn, c_tld1)) continue;
    map.add_explicit(row[c_fqdn], row[c_tld1]);
  }
  return map;
}

std::optional<std::string> Tld1Map::tld1(std::string_view domain) const {
  const std::string host = normalize_domain(domain);
  if (auto it = explicit_.find(host); it != explicit_.end()) return it->second;
  if (!rules_) return std::nullopt;
  try {
    return map_to_tld1(host, *rules_);
  } catch (const UnmappableDomain&) {
    return std::nullopt;
  }
}

// ---------------------------------------------------------------------------

EntityMap::EntityMap(std::vector<EntityRecord> records) {
  for (auto& r : records) {
    auto [it, inserted] = index_.emplace(r.tld1, records_.size());
    if (inserted) {
      records_.push_back(std::move(r));
    } else if (records_[it->second].entity != r.entity) {
      throw ConflictError(r.tld1, "mapped to both '" + records_[it->second].entity + "' and '" +
                                      r.entity + "'");
    }
  }
}

const EntityRecord* EntityMap::find(std::string_view tld1) const {
  auto it = index_.find(std::string(tld1));
  return it == index_.end() ? nullptr : &records_[it->second];
}

std::optional<std::string> EntityMap::entity_of(std::string_view tld1) const {
  if (const auto* r = find(tld1)) return r->entity;
  return std::nullopt;
}

// ---------------------------------------------------------------------------

bool PairList::add(LabelPair pair) {
  if (pair.a == pair.b) {
    ++self_pairs_;
    return false;
  }
  if (pair.b < pair.a) {
    std::swap(pair.a, pair.b);
    std::swap(pair.entity_a, pair.entity_b);
  }
  auto key = std::make_pair(pair.a, pair.b);
  if (index_.count(key)) return false;
  index_.emplace(std::move(key), pairs_.size());
  pairs_.push_back(std::move(pair));
  return true;
}

bool PairList::contains(std::string_view a, std::string_view b) const {
  std::string x(a), y(b);
  if (y < x) std::swap(x, y);
  return index_.count({x, y}) > 0;
}

CohostingResult derive_cohosting_pairs(std::span<const InteractionRecord> records,
                                       const Tld1Map& tld1_map, const EntityMap& entity_map) {
  CohostingResult result;
  std::map<std::string, std::set<std::string>> by_ip;
  for (const auto& r : records) {
    if (!r.server_ip) continue;
    // records built in code may carry non-canonical text
    auto ip = normalize_ip(*r.server_ip);
    if (!ip) continue;
    ++result.records_with_ip;
    if (auto t = tld1_map.tld1(r.requested_domain)) by_ip[*ip].insert(*t);
  }
  if (result.records_with_ip == 0) {
    result.warnings.push_back("no record carries a server address; co-hosting list is empty");
    return result;
  }
  // std::map iterates addresses in ascending order, so the first address that
  // produces a pair is the smallest one shared by it.
  for (const auto& [ip, domains] : by_ip) {
    for (auto i = domains.begin(); i != domains.end(); ++i) {
      for (auto j = std::next(i); j != domains.end(); ++j) {
        LabelPair p{*i, *j, entity_map.entity_of(*i), entity_map.entity_of(*j), std::nullopt, ip};
        result.pairs.add(std::move(p));
      }
    }
  }
  return result;
}

// ---------------------------------------------------------------------------

std::vector<EntityRecord> load_entities(std::istream& in, char delim,
                                        std::vector<std::string>* warnings) {
  std::vector<EntityRecord> out;
  csv::Reader reader(in, delim);
  if (!reader.has_header()) return out;
  const auto c_tld1 = reader.require({"tld1", "tld+1", "domain"}, "tld1");
  const auto c_entity = reader.require({"entity", "legal_entity", "organization"}, "entity");
  const auto c_activity = reader.column({"activity", "category", "functionality"});
  std::unordered_map<std::string, std::size_t> seen;
  std::vector<std::string> row;
  while (reader.next(row)) {
    if (row.size() <= std::max(c_tld1, c_entity)) continue;
    EntityRecord rec{normalize_domain(row[c_tld1]), trimmed(row[c_entity]),
                     c_activity && *c_activity < row.size() ? trimmed(row[*c_activity]) : ""};
    if (rec.tld1.empty() || rec.entity.empty()) continue;
    auto [it, inserted] = seen.emplace(rec.tld1, out.size());
    if (inserted) {
      out.push_back(std::move(rec));
      continue;
    }
    const auto& prev = out[it->second];
    if (prev.entity != rec.entity) {
      throw ConflictError(rec.tld1, "mapped to both '" + prev.entity + "' and '" + rec.entity + "'");
    }
    if (prev.activity != rec.activity && warnings) {
      warnings->push_back("tld1 " + rec.tld1 + " listed with two activities; keeping '" +
                          prev.activity + "'");
    }
  }
  return out;
}

PairList load_pairs(std::istream& in, PairKind kind, char delim) {
  PairList list(kind);
  csv::Reader reader(in, delim);
  if (!reader.has_header()) return list;
  const auto c_a = reader.require({"domain_a", "tpd_a", "domain1", "tld1_a"}, "domain_a");
  const auto c_b = reader.require({"domain_b", "tpd_b", "domain2", "tld1_b"}, "domain_b");
  const auto c_ea = reader.column({"entity_a", "entity1"});
  const auto c_eb = reader.column({"entity_b", "entity2"});
  const auto c_entity = reader.column({"entity", "acquirer", "legal_entity"});
  const auto c_ip = reader.column({"ip", "server_ip"});
  auto cell = [](const std::vector<std::string>& row, std::optional<std::size_t> c)
      -> std::optional<std::string> {
    if (!c || *c >= row.size()) return std::nullopt;
    auto v = trimmed(row[*c]);
    if (v.empty()) return std::nullopt;
    return v;
  };
  std::vector<std::string> row;
  while (reader.next(row)) {
    if (row.size() <= std::max(c_a, c_b)) continue;
    LabelPair p{normalize_domain(row[c_a]), normalize_domain(row[c_b]), cell(row, c_ea),
                cell(row, c_eb), cell(row, c_entity), std::nullopt};
    if (auto ip = cell(row, c_ip)) p.ip = normalize_ip(*ip).value_or(*ip);
    if (p.a.empty() || p.b.empty()) continue;
    list.add(std::move(p));
  }
  return list;
}

Metadata load_metadata(std::istream* entity_stream, std::istream* cohosting_stream,
                       std::istream* merging_stream, char delim) {
  Metadata md;
  if (entity_stream) md.entities = load_entities(*entity_stream, delim, &md.warnings);
  if (cohosting_stream) md.cohosting = load_pairs(*cohosting_stream, PairKind::cohosting, delim);
  if (merging_stream) md.merging = load_pairs(*merging_stream, PairKind::future_merging, delim);
  return md;
}

}  // namespace webgeo
