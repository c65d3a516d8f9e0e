#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "webgeo/domain.hpp"

namespace webgeo {

// One observed HTTP request between two domains during a page render.
struct InteractionRecord {
  std::int64_t timestamp = 0;
  std::string first_party;
  std::string country;
  std::string referrer_domain;
  std::string requested_domain;
  std::string request_type;
  std::optional<std::string> server_ip;
  // Values of schema.keep_columns, keyed by the column name given there.
  std::map<std::string, std::string> extra;

  friend bool operator==(const InteractionRecord&, const InteractionRecord&) = default;
};

// Column names of the raw interaction log. Defaults follow the released
// artifact; matching ignores case and punctuation.
struct ColumnSchema {
  char delimiter = ',';
  std::string timestamp = "Timestamp";
  std::string first_party = "FirstPartyDomain";
  std::string country = "Country";
  std::string referrer = "ReferrerDomain";
  std::string requested = "RequestedDomain";
  std::string request_type = "RequestType";
  std::string server_ip = "ServerIP";
  // Extra columns to retain in InteractionRecord::extra (e.g. a user id used
  // as contributor key). Missing extra columns are a schema error.
  std::vector<std::string> keep_columns;
};

struct ParseResult {
  std::vector<InteractionRecord> records;
  std::size_t malformed = 0;
  std::size_t invalid_ip = 0;  // rows kept, address dropped
  std::vector<std::size_t> malformed_lines;
};

ParseResult parse_interactions(std::istream& in, const ColumnSchema& schema = {});

// Writes a table parse_interactions reads back to the same records.
void write_interactions(std::ostream& out, std::span<const InteractionRecord> records,
                        const ColumnSchema& schema = {});

// Domain -> TLD+1 resolution: an explicit FQDN table first, public-suffix
// rules as fallback.
class Tld1Map {
 public:
  Tld1Map() = default;
  explicit Tld1Map(PublicSuffixRules rules) : rules_(std::move(rules)) {}

  void add_explicit(const std::string& fqdn, const std::string& tld1);
  static Tld1Map load_fqdn_table(std::istream& in, char delim, std::optional<PublicSuffixRules> rules);

  // nullopt when the domain cannot be mapped (invalid, bare suffix, or absent
  // from the explicit table with no rules configured).
  std::optional<std::string> tld1(std::string_view domain) const;

  std::size_t explicit_size() const { return explicit_.size(); }

 private:
  std::optional<PublicSuffixRules> rules_;
  std::unordered_map<std::string, std::string> explicit_;
};

struct EntityRecord {
  std::string tld1;
  std::string entity;
  std::string activity;
};

// tld1 -> legal entity + activity category.
class EntityMap {
 public:
  EntityMap() = default;
  explicit EntityMap(std::vector<EntityRecord> records);

  const EntityRecord* find(std::string_view tld1) const;
  std::optional<std::string> entity_of(std::string_view tld1) const;
  const std::vector<EntityRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

 private:
  std::vector<EntityRecord> records_;
  std::unordered_map<std::string, std::size_t> index_;
};

enum class PairKind { cohosting, future_merging };

// Unordered label pair, stored with a < b.
struct LabelPair {
  std::string a;
  std::string b;
  std::optional<std::string> entity_a;
  std::optional<std::string> entity_b;
  std::optional<std::string> entity;  // merging target entity
  std::optional<std::string> ip;
};

class PairList {
 public:
  explicit PairList(PairKind kind = PairKind::cohosting) : kind_(kind) {}

  PairKind kind() const { return kind_; }
  // Returns false (and ignores the pair) for self-pairs and duplicates.
  bool add(LabelPair pair);
  bool contains(std::string_view a, std::string_view b) const;
  const std::vector<LabelPair>& pairs() const { return pairs_; }
  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }
  std::size_t rejected_self_pairs() const { return self_pairs_; }

 private:
  PairKind kind_;
  std::vector<LabelPair> pairs_;
  std::map<std::pair<std::string, std::string>, std::size_t> index_;
  std::size_t self_pairs_ = 0;
};

struct CohostingResult {
  PairList pairs{PairKind::cohosting};
  std::size_t records_with_ip = 0;
  std::vector<std::string> warnings;
};

// All unordered pairs of distinct TLD+1 domains observed responding from the
// same server address, deduplicated across addresses. Each pair carries the
// lexicographically smallest shared address and its endpoints' entities.
CohostingResult derive_cohosting_pairs(std::span<const InteractionRecord> records,
                                       const Tld1Map& tld1_map, const EntityMap& entity_map);

struct Metadata {
  std::vector<EntityRecord> entities;
  PairList cohosting{PairKind::cohosting};
  PairList merging{PairKind::future_merging};
  std::vector<std::string> warnings;
};

// Entity table: tld1, entity, activity. Co-hosting table: domain_a, domain_b
// and optional entity_a, entity_b, ip. Merging table: domain_a, domain_b,
// entity. Any stream may be null (treated as empty).
Metadata load_metadata(std::istream* entity_stream, std::istream* cohosting_stream,
                       std::istream* merging_stream, char delim = ',');

std::vector<EntityRecord> load_entities(std::istream& in, char delim, std::vector<std::string>* warnings = nullptr);
PairList load_pairs(std::istream& in, PairKind kind, char delim);

}  // namespace webgeo
