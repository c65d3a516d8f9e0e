#pragma once

#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>

namespace webgeo {

// Lowercases and strips scheme, credentials, port, path, query and a trailing
// dot: "HTTPS://WWW.Example.com:443/a?b" -> "www.example.com".
std::string normalize_domain(std::string_view raw);

// Canonical textual form of an IPv4/IPv6 address (RFC 5952 compression for
// IPv6). Returns nullopt for strings that are not addresses.
std::optional<std::string> normalize_ip(std::string_view raw);

bool is_valid_hostname(std::string_view host);

// Rules in the publicsuffix.org format: one rule per line, "//" comments,
// "*" wildcard labels and "!" exceptions.
class PublicSuffixRules {
 public:
  PublicSuffixRules() = default;

  // When icann_only is set, parsing stops at the "===END ICANN DOMAINS==="
  // marker so privately registered suffixes (cloud buckets, CDNs) are treated
  // as ordinary registrable domains.
  static PublicSuffixRules parse(std::istream& in, bool icann_only = true);
  static PublicSuffixRules load(const std::string& path, bool icann_only = true);
  static PublicSuffixRules from_rules(std::initializer_list<std::string_view> rules);

  void add_rule(std::string_view rule);
  std::size_t size() const { return exact_.size() + wildcard_.size() + exception_.size(); }

  // Number of labels of the public suffix of host (always >= 1: the implicit
  // "*" rule applies when nothing matches).
  std::size_t suffix_label_count(std::string_view host) const;

 private:
  std::unordered_set<std::string> exact_;
  std::unordered_set<std::string> wildcard_;   // stored without the "*." prefix
  std::unordered_set<std::string> exception_;  // stored without the "!"
};

// Registrable domain (public suffix + one label). Throws UnmappableDomain when
// the host has no label left of its public suffix.
std::string map_to_tld1(std::string_view fqdn, const PublicSuffixRules& rules);

}  // namespace webgeo
