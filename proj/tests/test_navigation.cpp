#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "support.hpp"
#include "webgeo/errors.hpp"
#include "webgeo/navigation.hpp"
#include "webgeo/synthetic.hpp"
#include "webgeo/topology.hpp"

using namespace webgeo;
using testing::graph;
using testing::psl;
using testing::rec;

namespace {

using Chain = std::vector<std::string>;

// Every index subset of the window, in order, checked for being a chain and
// for being neither extendable at the end nor at the front.
std::vector<Chain> maximal_chains_oracle(const std::vector<std::pair<std::string, std::string>>& w) {
  const std::size_t m = w.size();
  std::vector<Chain> out;
  for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < m; ++i) {
      if (mask >> i & 1u) idx.push_back(i);
    }
    Chain labels = {w[idx[0]].first, w[idx[0]].second};
    bool ok = true;
    for (std::size_t k = 1; k < idx.size() && ok; ++k) {
      ok = w[idx[k]].first == labels.back();
      labels.push_back(w[idx[k]].second);
    }
    if (!ok) continue;
    Chain sorted = labels;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) continue;
    auto fresh = [&](const std::string& l) { return std::find(labels.begin(), labels.end(), l) == labels.end(); };
    bool maximal = true;
    for (std::size_t j = idx.back() + 1; j < m; ++j) {
      if (w[j].first == labels.back() && fresh(w[j].second)) maximal = false;
    }
    for (std::size_t j = 0; j < idx.front(); ++j) {
      if (w[j].second == labels.front() && fresh(w[j].first)) maximal = false;
    }
    if (maximal) out.push_back(labels);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Chain> chains_of(const PathExtraction& ex) {
  std::vector<Chain> out;
  for (const auto& p : ex.paths) out.push_back(p.nodes);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<InteractionRecord> window_records(const std::vector<std::pair<std::string, std::string>>& w) {
  std::vector<InteractionRecord> out;
  for (std::size_t i = 0; i < w.size(); ++i) out.push_back(rec(static_cast<std::int64_t>(i), "site.org", w[i].first, w[i].second));
  return out;
}

Embedding embedding_of(const DomainNetwork& net, const std::vector<PolarCoordinate>& coords) {
  Embedding e;
  e.labels = net.labels();
  e.coords = coords;
  e.degrees.assign(net.size(), 1);
  e.meta.assign(net.size(), NodeMeta{});
  e.radius = 10.0;
  e.reindex();
  return e;
}

}  // namespace

TEST_SUITE("navigation") {

TEST_CASE("a simple referrer chain") {
  const auto map = psl();
  std::vector<InteractionRecord> r = {rec(10, "site.org", "a.com", "b.com"), rec(12, "site.org", "b.com", "c.com")};
  const auto ex = extract_interaction_paths(r, map, EntityMap{});
  REQUIRE(ex.paths.size() == 1);
  CHECK(ex.paths[0].nodes == Chain{"a.com", "b.com", "c.com"});
  CHECK(ex.paths[0].hops() == 2);
  CHECK(ex.paths[0].first_party == "site.org");
  CHECK(ex.paths[0].timestamp == 10);
  CHECK(ex.windows == 1);

  const auto one = extract_interaction_paths(std::vector<InteractionRecord>{r[0]}, map, EntityMap{});
  REQUIRE(one.paths.size() == 1);
  CHECK(one.paths[0].nodes == Chain{"a.com", "b.com"});
}

TEST_CASE("gaps split page visits and first parties never mix") {
  const auto map = psl();
  std::vector<InteractionRecord> r = {rec(0, "site.org", "a.com", "b.com"), rec(61, "site.org", "b.com", "c.com"),
                                      rec(1, "other.org", "b.com", "c.com")};
  const auto ex = extract_interaction_paths(r, map, EntityMap{});
  CHECK(ex.windows == 3);
  CHECK(chains_of(ex) == std::vector<Chain>{{"a.com", "b.com"}, {"b.com", "c.com"}, {"b.com", "c.com"}});
  CHECK(ex.distinct == 2);
  PathOptions wide;
  wide.window_gap = 61;
  const auto joined = extract_interaction_paths(r, map, EntityMap{}, wide);
  CHECK(joined.windows == 2);
  CHECK(chains_of(joined) == std::vector<Chain>{{"a.com", "b.com", "c.com"}, {"b.com", "c.com"}});
}

TEST_CASE("entity level drops self-transitions and repeated pairs") {
  const auto map = psl();
  EntityMap ents({{"a.com", "Acme", "ads"}, {"b.com", "Acme", "ads"}, {"c.com", "Beta", "cdn"}});
  std::vector<InteractionRecord> r = {rec(0, "site.org", "a.com", "b.com"), rec(1, "site.org", "b.com", "c.com"),
                                      rec(2, "site.org", "a.com", "c.com")};
  PathOptions opt;
  opt.level = Level::entity;
  const auto ex = extract_interaction_paths(r, map, ents, opt);
  CHECK(chains_of(ex) == std::vector<Chain>{{"Acme", "Beta"}});
}

TEST_CASE("branching window equals the subset oracle") {
  const std::vector<std::pair<std::string, std::string>> w = {
      {"a.com", "b.com"}, {"b.com", "c.com"}, {"b.com", "d.com"}, {"c.com", "e.com"},
      {"d.com", "e.com"}, {"e.com", "f.com"}, {"a.com", "c.com"}, {"f.com", "a.com"}};
  const auto ex = extract_interaction_paths(window_records(w), psl(), EntityMap{});
  const auto want = maximal_chains_oracle(w);
  CHECK(want.size() >= 3);
  CHECK(chains_of(ex) == want);
}

TEST_CASE("random windows equal the subset oracle") {
  const auto map = psl();
  const std::vector<std::string> names = {"a.com", "b.com", "c.com", "d.com", "e.com"};
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::pair<std::string, std::string>> w;
    const std::size_t m = 1 + rng() % 8;
    while (w.size() < m) {
      const auto a = names[rng() % names.size()], b = names[rng() % names.size()];
      if (a == b || std::find(w.begin(), w.end(), std::make_pair(a, b)) != w.end()) continue;
      w.emplace_back(a, b);
    }
    const auto ex = extract_interaction_paths(window_records(w), map, EntityMap{});
    CHECK(chains_of(ex) == maximal_chains_oracle(w));
  }
}

TEST_CASE("chain cap per window") {
  std::vector<std::pair<std::string, std::string>> w;
  for (char c = 'b'; c <= 'h'; ++c) w.emplace_back("a.com", std::string(1, c) + ".com");
  PathOptions opt;
  opt.max_chains_per_window = 3;
  const auto ex = extract_interaction_paths(window_records(w), psl(), EntityMap{}, opt);
  CHECK(ex.paths.size() == 3);
  CHECK(ex.truncated_windows == 1);
}

TEST_CASE("path profile") {
  const auto square = graph({{"a", "b"}, {"b", "c"}, {"c", "d"}, {"d", "a"}});
  std::vector<InteractionPath> direct = {{{"a", "b"}, "s", 0}, {{"b", "c"}, "s", 0}, {{"c", "d"}, "s", 0}, {{"d", "a"}, "s", 0}};
  const auto p1 = path_profile(direct, square);
  CHECK(p1.shortest_fraction == 1.0);
  CHECK(p1.kept == 4);
  auto mixed = direct;
  mixed.push_back({{"a", "b", "c", "d"}, "s", 0});
  mixed.push_back({{"a", "zz"}, "s", 0});
  const auto p2 = path_profile(mixed, square);
  CHECK(p2.shortest_fraction == doctest::Approx(0.8));
  CHECK(p2.hop_distribution.at(1) == doctest::Approx(0.8));
  CHECK(p2.hop_distribution.at(3) == doctest::Approx(0.2));
  CHECK(p2.max_hops == 3);
  CHECK(p2.dropped == 1);
  CHECK(p2.mean_hops == doctest::Approx(7.0 / 5.0));
  std::ostringstream out;
  write_path_profile_csv(out, p2);
  CHECK(out.str().find("l,probability") != std::string::npos);
}

TEST_CASE("greedy routing examples") {
  SUBCASE("adjacent destination") {
    const auto net = graph({{"a", "b"}, {"b", "c"}});
    std::vector<PolarCoordinate> c = {{5, 0}, {5, 3}, {5, 1}};
    const auto r = greedy_route(net, c, 0, 1);
    CHECK(r.delivered);
    CHECK(r.hops() == 1);
  }
  SUBCASE("star leaf to leaf through the hub") {
    std::vector<std::pair<std::string, std::string>> e;
    for (int i = 0; i < 8; ++i) e.emplace_back("hub", "leaf" + std::to_string(i));
    const auto net = graph(e);
    std::vector<PolarCoordinate> c(net.size());
    for (NodeId u = 0; u < net.size(); ++u) c[u] = {net.label(u) == "hub" ? 0.0 : 6.0, 0.7 * static_cast<double>(u)};
    const auto r = greedy_route(net, c, *net.find("leaf1"), *net.find("leaf5"));
    CHECK(r.delivered);
    CHECK(r.hops() == 2);
    CHECK(r.path[1] == *net.find("hub"));
  }
  SUBCASE("bouncing back to the previous node drops the packet") {
    const auto net = graph({{"s", "u"}, {"u", "w"}, {"w", "d"}, {"w", "x"}, {"x", "y"}});
    std::vector<PolarCoordinate> c(net.size());
    c[*net.find("d")] = {5, 0.0};
    c[*net.find("s")] = {5, 0.1};
    c[*net.find("u")] = {5, 1.0};
    c[*net.find("w")] = {5, 2.0};
    c[*net.find("x")] = {5, 3.0};
    c[*net.find("y")] = {5, 4.0};
    const auto r = greedy_route(net, c, *net.find("s"), *net.find("d"));
    CHECK_FALSE(r.delivered);
    CHECK_FALSE(r.budget_exhausted);
    CHECK(r.path.size() == 2);
  }
  SUBCASE("bad endpoints") {
    const auto net = graph({{"a", "b"}});
    std::vector<PolarCoordinate> c = {{1, 0}, {1, 1}};
    CHECK_THROWS_AS(greedy_route(net, c, 0, 0), ParameterError);
    CHECK_THROWS_AS(greedy_route(net, c, 0, 5), DataError);
  }
}

TEST_CASE("complete graph is perfectly navigable") {
  std::vector<std::pair<std::string, std::string>> e;
  for (int i = 0; i < 12; ++i)
    for (int j = i + 1; j < 12; ++j) e.emplace_back(testing::vlabel(i), testing::vlabel(j));
  const auto net = graph(e);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> r(0, 10), t(0, kTwoPi);
  std::vector<PolarCoordinate> c(net.size());
  for (auto& p : c) p = {r(rng), t(rng)};
  const auto rep = navigability_report(net, embedding_of(net, c));
  CHECK(rep.evaluated_pairs == 12 * 11);
  CHECK(rep.success_ratio == 1.0);
  CHECK(rep.mean_stretch == 1.0);
  CHECK(rep.max_stretch == 1.0);
}

TEST_CASE("navigability on a synthetic network") {
  const auto syn = generate_synthetic(300, 2.3, 0.3, 8.0, 12);
  const auto rep = navigability_report(syn.network, syn.truth);
  CHECK(rep.evaluated_pairs == syn.network.size() * (syn.network.size() - 1));
  CHECK(rep.success_ratio > 0.5);
  std::size_t delivered = 0;
  for (const auto& o : rep.outcomes) {
    if (!o.delivered) continue;
    ++delivered;
    CHECK(o.greedy_hops >= o.shortest_hops);
    CHECK(o.stretch >= 1.0);
  }
  CHECK(delivered == rep.delivered);
  CHECK(rep.max_stretch >= rep.mean_stretch);

  PairSelection sel;
  sel.sample = 500;
  sel.seed = 4;
  const auto a = navigability_report(syn.network, syn.truth, sel);
  const auto b = navigability_report(syn.network, syn.truth, sel);
  CHECK(a.evaluated_pairs == 500);
  std::ostringstream sa, sb;
  write_route_csv(sa, syn.network, a);
  write_route_csv(sb, syn.network, b);
  CHECK(sa.str() == sb.str());
  for (const auto& o : a.outcomes) CHECK(o.source != o.dest);
}

}
