#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "support.hpp"
#include "webgeo/association.hpp"
#include "webgeo/errors.hpp"

using namespace webgeo;
using testing::vlabel;

namespace {

Embedding make_embedding(const std::vector<std::string>& labels, const std::vector<PolarCoordinate>& coords,
                         Level level = Level::tld1) {
  Embedding e;
  e.level = level;
  e.labels = labels;
  e.coords = coords;
  e.degrees.assign(labels.size(), 1);
  e.meta.assign(labels.size(), NodeMeta{});
  e.radius = 10.0;
  e.temperature = 0.5;
  e.reindex();
  return e;
}

Embedding random_embedding(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> r(0.0, 8.0), t(0.0, kTwoPi);
  std::vector<std::string> labels;
  std::vector<PolarCoordinate> c;
  for (std::size_t i = 0; i < n; ++i) {
    labels.push_back(vlabel(i));
    c.push_back({r(rng), t(rng)});
  }
  return make_embedding(labels, c);
}

PositiveSet random_positives(std::size_t n, std::size_t m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<NodeId> pick(0, n - 1);
  PositiveSet p;
  while (p.pairs.size() < m) {
    NodeId a = pick(rng), b = pick(rng);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    if (std::find(p.pairs.begin(), p.pairs.end(), std::make_pair(a, b)) == p.pairs.end()) p.pairs.emplace_back(a, b);
  }
  std::sort(p.pairs.begin(), p.pairs.end());
  return p;
}

// half-open intervals, the last one closed on the right
bool in_bin(double x, std::size_t b, double w, std::size_t count) {
  const double lo = static_cast<double>(b) * w;
  if (b + 1 == count) return x >= lo;
  return x >= lo && x < lo + w;
}

}  // namespace

TEST_SUITE("association") {

TEST_CASE("three nodes, one positive, one bin") {
  const auto emb = make_embedding({"a", "b", "c"}, {{1.0, 0.0}, {1.0, 1.0}, {1.0, 2.0}});
  PositiveSet pos;
  pos.pairs = {{0, 1}};
  const auto bins = make_binning(emb, 100.0);
  CHECK(bins.count == 1);
  const auto curve = binned_association_curve(emb, pos, AssociationKind::grouping, bins);
  REQUIRE(curve.bins.size() == 1);
  CHECK(curve.bins[0].pairs == 3);
  CHECK(curve.bins[0].positives == 1);
  REQUIRE(curve.bins[0].probability);
  CHECK(*curve.bins[0].probability == doctest::Approx(1.0 / 3.0));
  CHECK(curve.baseline == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("binned counts equal a direct double loop") {
  const auto emb = random_embedding(20, 5);
  const auto pos = random_positives(20, 30, 6);
  const double max_d = max_pair_distance(emb);
  const double w = max_d / 5.0;
  const auto bins = make_binning(emb, w);
  CHECK(bins.count == 5);
  const auto curve = binned_association_curve(emb, pos, AssociationKind::cohosting, bins);
  REQUIRE(curve.bins.size() == 5);
  for (std::size_t b = 0; b < 5; ++b) {
    std::size_t pairs = 0, positives = 0;
    for (NodeId i = 0; i < 20; ++i) {
      for (NodeId j = i + 1; j < 20; ++j) {
        const double x = hyperbolic_distance(emb.coords[i], emb.coords[j]);
        if (!in_bin(x, b, w, 5)) continue;
        ++pairs;
        if (std::binary_search(pos.pairs.begin(), pos.pairs.end(), std::make_pair(i, j))) ++positives;
      }
    }
    CHECK(curve.bins[b].pairs == pairs);
    CHECK(curve.bins[b].positives == positives);
    if (pairs > 0) {
      REQUIRE(curve.bins[b].probability);
      CHECK(*curve.bins[b].probability == static_cast<double>(positives) / static_cast<double>(pairs));
    }
  }
}

TEST_CASE("conservation and exact baseline") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const std::size_t n = 30 + seed * 7;
    const auto emb = random_embedding(n, seed);
    const auto pos = random_positives(n, 5 * seed, seed + 100);
    const auto curve = binned_association_curve(emb, pos, AssociationKind::grouping, make_binning(emb, std::nullopt));
    std::size_t pairs = 0, positives = 0;
    for (const auto& b : curve.bins) {
      pairs += b.pairs;
      positives += b.positives;
      CHECK(b.positives <= b.pairs);
    }
    CHECK(pairs == n * (n - 1) / 2);
    CHECK(positives == pos.pairs.size());
    CHECK(curve.total_pairs == pairs);
    CHECK(curve.baseline == static_cast<double>(pos.pairs.size()) / static_cast<double>(n * (n - 1) / 2));
    CHECK(curve.bins.size() == 40);
  }
}

TEST_CASE("bin index rule") {
  Binning b;
  b.width = 0.5;
  b.count = 4;
  CHECK(b.index(0.0) == 0);
  CHECK(b.index(0.49) == 0);
  CHECK(b.index(0.5) == 1);
  CHECK(b.index(1.99) == 3);
  CHECK(b.index(2.0) == 3);
  CHECK(b.index(7.0) == 3);
  const auto emb = random_embedding(10, 1);
  CHECK_THROWS_AS(make_binning(emb, 0.0), ParameterError);
  CHECK_THROWS_AS(make_binning(emb, -1.0), ParameterError);
}

TEST_CASE("relabelling nodes leaves the curve unchanged") {
  const std::size_t n = 40;
  const auto emb = random_embedding(n, 11);
  const auto pos = random_positives(n, 25, 12);
  // reversed names reverse the node order
  std::vector<std::string> names(n);
  std::vector<PolarCoordinate> coords(n);
  for (std::size_t i = 0; i < n; ++i) {
    names[n - 1 - i] = "z" + vlabel(n - 1 - i);
    coords[n - 1 - i] = emb.coords[i];
  }
  const auto other = make_embedding(names, coords);
  PositiveSet moved;
  for (auto [a, b] : pos.pairs) moved.pairs.emplace_back(std::min(n - 1 - a, n - 1 - b), std::max(n - 1 - a, n - 1 - b));
  std::sort(moved.pairs.begin(), moved.pairs.end());
  const auto w = make_binning(emb, std::nullopt);
  const auto c1 = binned_association_curve(emb, pos, AssociationKind::grouping, w);
  const auto c2 = binned_association_curve(other, moved, AssociationKind::grouping, make_binning(other, std::nullopt));
  std::ostringstream s1, s2;
  write_curve_csv(s1, c1);
  write_curve_csv(s2, c2);
  CHECK(s1.str() == s2.str());
}

TEST_CASE("merging curves suppress bins without positives") {
  const auto emb = random_embedding(30, 21);
  PositiveSet pos;
  pos.pairs = {{0, 1}};
  const auto bins = make_binning(emb, std::nullopt);
  const auto merging = binned_association_curve(emb, pos, AssociationKind::merging, bins);
  const auto cohost = binned_association_curve(emb, pos, AssociationKind::cohosting, bins);
  std::size_t with_pairs = 0;
  for (std::size_t b = 0; b < merging.bins.size(); ++b) {
    const auto& m = merging.bins[b];
    const auto& c = cohost.bins[b];
    CHECK(c.suppressed == false);
    CHECK(c.probability.has_value() == (c.pairs > 0));
    if (m.pairs > 0) ++with_pairs;
    if (m.pairs > 0 && m.positives == 0) {
      CHECK(m.suppressed);
      CHECK_FALSE(m.probability);
    } else {
      CHECK_FALSE(m.suppressed);
    }
  }
  CHECK(merging.suppressed_bins.size() == with_pairs - 1);
  // suppression hides bins but never changes the baseline
  CHECK(merging.baseline == cohost.baseline);
}

TEST_CASE("empty positive set is an error") {
  const auto emb = random_embedding(10, 2);
  CHECK_THROWS_AS(binned_association_curve(emb, PositiveSet{}, AssociationKind::grouping, make_binning(emb, std::nullopt)),
                  DataError);
}

TEST_CASE("grouping positives") {
  const auto emb = make_embedding({"a.com", "b.com", "c.com", "d.com", "e.com"},
                                  {{1, 0}, {1, 1}, {1, 2}, {1, 3}, {1, 4}});
  EntityMap map({{"a.com", "Acme", "ads"},
                 {"b.com", "Acme", "ads"},
                 {"c.com", "Acme", "cdn"},
                 {"d.com", "Solo", "ads"},
                 {"x.com", "Solo", "ads"}});
  const auto pos = grouping_positives(emb, map);
  const std::vector<std::pair<NodeId, NodeId>> want = {{0, 1}, {0, 2}, {1, 2}};
  CHECK(pos.pairs == want);
  CHECK(pos.dropped == 1);  // d.com with the absent x.com
  auto ent = emb;
  ent.level = Level::entity;
  CHECK(grouping_positives(ent, map).pairs.empty());
}

TEST_CASE("pair lists lift to entity level") {
  EntityMap map({{"a.com", "Acme", "ads"}, {"b.com", "Acme", "ads"}, {"c.com", "Beta", "cdn"}});
  const auto emb = make_embedding({"Acme", "Beta", "Gamma"}, {{1, 0}, {1, 1}, {1, 2}}, Level::entity);
  PairList list;
  list.add({"a.com", "c.com"});
  list.add({"a.com", "b.com"});
  list.add({"b.com", "c.com"});
  list.add({"c.com", "z.com", std::nullopt, std::string("Gamma")});
  list.add({"c.com", "q.com"});
  const auto pos = positives_from_pairs(emb, list, map);
  const std::vector<std::pair<NodeId, NodeId>> want = {{0, 1}, {1, 2}};
  CHECK(pos.pairs == want);
  CHECK(pos.collapsed == 2);  // a-b inside Acme, b-c duplicates a-c
  CHECK(pos.dropped == 1);    // q.com has no node
}

TEST_CASE("relation classification") {
  CHECK(classify_relation("Ads", " ads ") == Relation::similar);
  CHECK(classify_relation("web  analytics", "Web Analytics") == Relation::similar);
  CHECK(classify_relation("ads", "cdn") == Relation::complementary);
  CHECK(classify_relation("", "cdn") == Relation::unknown);
  CHECK(classify_relation("Unknown", "cdn") == Relation::unknown);
  CHECK(canonical_activity("  Social \t Media ") == "social media");
}

TEST_CASE("relation histogram") {
  // six positives in one bin: three similar, three complementary
  std::vector<std::string> labels = {"a.com", "b.com", "c.com", "d.com", "e.com", "f.com"};
  const auto emb = make_embedding(labels, {{1, 0}, {1, 0.1}, {1, 0.2}, {1, 0.3}, {1, 0.4}, {1, 0.5}});
  EntityMap map({{"a.com", "E1", "ads"},
                 {"b.com", "E2", "ads"},
                 {"c.com", "E3", "ads"},
                 {"d.com", "E4", "cdn"},
                 {"e.com", "E5", "social"},
                 {"f.com", "E6", "video"}});
  PositiveSet pos;
  pos.pairs = {{0, 1}, {0, 2}, {1, 2}, {0, 3}, {3, 4}, {4, 5}};
  const auto h = relation_histogram(emb, pos, map, make_binning(emb, 100.0));
  REQUIRE(h.similar.size() == 1);
  CHECK(h.similar[0] == 3);
  CHECK(h.complementary[0] == 3);
  CHECK(h.unknown[0] == 0);
}

TEST_CASE("relation histogram matches a per-pair oracle") {
  const std::size_t n = 50;
  auto emb = random_embedding(n, 41);
  const std::vector<std::string> acts = {"ads", "cdn", "analytics", "unknown", ""};
  std::vector<EntityRecord> recs;
  std::mt19937_64 rng(42);
  for (std::size_t i = 0; i < n; ++i) recs.push_back({emb.labels[i], "E" + std::to_string(i), acts[rng() % acts.size()]});
  EntityMap map(recs);
  const auto pos = random_positives(n, 200, 43);
  const auto bins = make_binning(emb, std::nullopt);
  const auto h = relation_histogram(emb, pos, map, bins);
  const auto curve = binned_association_curve(emb, pos, AssociationKind::cohosting, bins);
  for (std::size_t b = 0; b < bins.count; ++b) {
    std::size_t s = 0, c = 0, u = 0;
    for (auto [i, j] : pos.pairs) {
      if (!in_bin(hyperbolic_distance(emb.coords[i], emb.coords[j]), b, bins.width, bins.count)) continue;
      const std::string& x = recs[i].activity;
      const std::string& y = recs[j].activity;
      if (x.empty() || y.empty() || x == "unknown" || y == "unknown") {
        ++u;
      } else if (x == y) {
        ++s;
      } else {
        ++c;
      }
    }
    CHECK(h.similar[b] == s);
    CHECK(h.complementary[b] == c);
    CHECK(h.unknown[b] == u);
    CHECK(s + c + u == curve.bins[b].positives);
  }
}

TEST_CASE("rank correlation") {
  const std::vector<double> x = {1, 2, 3, 4, 5};
  const std::vector<double> down = {10, 8, 6, 4, 1};
  const std::vector<double> up = {1, 4, 9, 16, 25};
  CHECK(spearman(x, down) == doctest::Approx(-1.0));
  CHECK(spearman(x, up) == doctest::Approx(1.0));
  const std::vector<double> tied = {1, 2, 2, 3, 4};
  // ranks 1, 2.5, 2.5, 4, 5 against 1..5
  const double want = 9.5 / std::sqrt(10.0 * 9.5);
  CHECK(spearman(x, tied) == doctest::Approx(want));
  const std::vector<double> flat = {3, 3, 3, 3, 3};
  CHECK(std::isnan(spearman(x, flat)));
}

TEST_CASE("curve csv layout") {
  const auto emb = make_embedding({"a", "b", "c"}, {{1.0, 0.0}, {1.0, 1.0}, {1.0, 2.0}});
  PositiveSet pos;
  pos.pairs = {{0, 2}};
  std::ostringstream out;
  write_curve_csv(out, binned_association_curve(emb, pos, AssociationKind::cohosting, make_binning(emb, 100.0)));
  std::istringstream in(out.str());
  std::string l1, l2, l3;
  std::getline(in, l1);
  std::getline(in, l2);
  std::getline(in, l3);
  CHECK(l1.rfind("# kind=cohosting baseline=", 0) == 0);
  CHECK(l2 == "bin_left,bin_right,pairs,positives,probability,suppressed");
  CHECK(l3.find(",3,1,") != std::string::npos);
}

}
