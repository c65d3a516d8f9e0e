#include "webgeo/domain.hpp"

#include <arpa/inet.h>

#include <algorithm>
#include <cctype>
#include <fstream>

#include "webgeo/errors.hpp"

namespace webgeo {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

// Suffix of host made of its last `labels` labels.
std::string_view last_labels(std::string_view host, std::size_t labels) {
  std::size_t pos = host.size();
  for (std::size_t i = 0; i < labels; ++i) {
    std::size_t dot = host.rfind('.', pos == 0 ? 0 : pos - 1);
    if (dot == std::string_view::npos || pos == 0) return host;
    pos = dot;
  }
  return host.substr(pos + 1);
}

std::size_t label_count(std::string_view host) {
  return static_cast<std::size_t>(std::count(host.begin(), host.end(), '.')) + 1;
}

}  // namespace

std::string normalize_domain(std::string_view raw) {
  std::string_view s = trim(raw);
  if (auto scheme = s.find("://"); scheme != std::string_view::npos) s.remove_prefix(scheme + 3);
  if (s.substr(0, 2) == "//") s.remove_prefix(2);
  if (auto end = s.find_first_of("/?#"); end != std::string_view::npos) s = s.substr(0, end);
  if (auto at = s.rfind('@'); at != std::string_view::npos) s.remove_prefix(at + 1);
  if (!s.empty() && s.front() == '[') {
    // bracketed IPv6 literal, optionally followed by :port
    auto close = s.find(']');
    if (close != std::string_view::npos) s = s.substr(1, close - 1);
  } else if (std::count(s.begin(), s.end(), ':') == 1) {
    s = s.substr(0, s.find(':'));
  }
  while (!s.empty() && s.back() == '.') s.remove_suffix(1);
  return lower(s);
}

std::optional<std::string> normalize_ip(std::string_view raw) {
  std::string s(trim(raw));
  if (s.size() > 2 && s.front() == '[' && s.back() == ']') s = s.substr(1, s.size() - 2);
  if (s.empty()) return std::nullopt;
  char buf[INET6_ADDRSTRLEN];
  unsigned char addr[sizeof(struct in6_addr)];
  if (inet_pton(AF_INET, s.c_str(), addr) == 1) {
    if (inet_ntop(AF_INET, addr, buf, sizeof buf)) return std::string(buf);
  }
  if (inet_pton(AF_INET6, s.c_str(), addr) == 1) {
    if (inet_ntop(AF_INET6, addr, buf, sizeof buf)) return std::string(buf);
  }
  return std::nullopt;
}

bool is_valid_hostname(std::string_view host) {
  if (host.empty() || host.size() > 253) return false;
  std::size_t label_len = 0;
  for (char c : host) {
    if (c == '.') {
      if (label_len == 0) return false;
      label_len = 0;
      continue;
    }
    const auto u = static_cast<unsigned char>(c);
    if (!(std::isalnum(u) || c == '-' || c == '_')) return false;
    if (++label_len > 63) return false;
  }
  return label_len > 0;
}

PublicSuffixRules PublicSuffixRules::parse(std::istream& in, bool icann_only) {
  PublicSuffixRules rules;
  std::string line;
  while (std::getline(in, line)) {
    if (icann_only && line.find("===END ICANN DOMAINS===") != std::string::npos) break;
    std::string_view v = trim(line);
    if (v.empty() || v.substr(0, 2) == "//") continue;
    // a rule ends at the first whitespace
    if (auto ws = v.find_first_of(" \t"); ws != std::string_view::npos) v = v.substr(0, ws);
    rules.add_rule(v);
  }
  return rules;
}

PublicSuffixRules PublicSuffixRules::load(const std::string& path, bool icann_only) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open suffix rules: " + path);
  return parse(in, icann_only);
}

PublicSuffixRules PublicSuffixRules::from_rules(std::initializer_list<std::string_view> rules) {
  PublicSuffixRules out;
  for (auto r : rules) out.add_rule(r);
  return out;
}

void PublicSuffixRules::add_rule(std::string_view rule) {
  std::string r = lower(trim(rule));
  if (r.empty()) return;
  if (r.front() == '!') {
    exception_.insert(r.substr(1));
  } else if (r.rfind("*.", 0) == 0) {
    wildcard_.insert(r.substr(2));
  } else {
    exact_.insert(r);
  }
}

std::size_t PublicSuffixRules::suffix_label_count(std::string_view host) const {
  const std::size_t n = label_count(host);
  std::size_t best = 1;  // implicit "*" rule
  for (std::size_t k = 1; k <= n; ++k) {
    std::string candidate(last_labels(host, k));
    if (exception_.count(candidate)) return k - 1;
    if (exact_.count(candidate)) best = std::max(best, k);
    if (k >= 2 && wildcard_.count(std::string(last_labels(host, k - 1)))) best = std::max(best, k);
  }
  return best;
}

std::string map_to_tld1(std::string_view fqdn, const PublicSuffixRules& rules) {
  std::string host = normalize_domain(fqdn);
  if (normalize_ip(host)) return host;  // address literals are their own node
  if (!is_valid_hostname(host)) throw UnmappableDomain(std::string(fqdn));
  const std::size_t suffix = rules.suffix_label_count(host);
  if (label_count(host) <= suffix) throw UnmappableDomain(host);
  return std::string(last_labels(host, suffix + 1));
}

}  // namespace webgeo
