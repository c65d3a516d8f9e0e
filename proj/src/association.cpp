#include "webgeo/association.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "webgeo/csv.hpp"
#include "webgeo/errors.hpp"
#include "webgeo/network.hpp"
#include "webgeo/parallel.hpp"

namespace webgeo {

namespace {

constexpr std::size_t kDefaultBins = 40;
constexpr std::size_t kScanBlocks = 64;

void normalize(PositiveSet& set) {
  std::sort(set.pairs.begin(), set.pairs.end());
  set.pairs.erase(std::unique(set.pairs.begin(), set.pairs.end()), set.pairs.end());
}

std::pair<NodeId, NodeId> ordered(NodeId a, NodeId b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }

std::vector<double> ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
    i = j + 1;
  }
  return r;
}

}  // namespace

std::string_view to_string(AssociationKind kind) {
  switch (kind) {
    case AssociationKind::grouping: return "grouping";
    case AssociationKind::merging: return "merging";
    case AssociationKind::cohosting: return "cohosting";
  }
  return "?";
}

std::string_view to_string(Relation relation) {
  switch (relation) {
    case Relation::similar: return "similar";
    case Relation::complementary: return "complementary";
    case Relation::unknown: return "unknown";
  }
  return "?";
}

PositiveSet grouping_positives(const Embedding& emb, const EntityMap& entity_map) {
  PositiveSet out;
  if (emb.level == Level::entity) return out;
  std::map<std::string, std::vector<NodeId>> members;
  std::map<std::string, std::size_t> listed;
  for (const auto& rec : entity_map.records()) {
    ++listed[rec.entity];
    if (auto i = emb.find(rec.tld1)) members[rec.entity].push_back(*i);
  }
  for (auto& [entity, nodes] : members) {
    std::sort(nodes.begin(), nodes.end());
    for (std::size_t a = 0; a < nodes.size(); ++a) {
      for (std::size_t b = a + 1; b < nodes.size(); ++b) out.pairs.emplace_back(nodes[a], nodes[b]);
    }
  }
  for (auto [entity, m] : listed) {
    const std::size_t e = members.count(entity) ? members[entity].size() : 0;
    out.dropped += m * (m - 1) / 2 - e * (e > 0 ? e - 1 : 0) / 2;
  }
  normalize(out);
  return out;
}

PositiveSet positives_from_pairs(const Embedding& emb, const PairList& list, const EntityMap& entity_map) {
  PositiveSet out;
  auto lift = [&](const std::string& tld1, const std::optional<std::string>& hint) {
    if (emb.level == Level::tld1) return tld1;
    if (entity_map.find(tld1) == nullptr && hint && !hint->empty()) return *hint;
    return level_label(tld1, Level::entity, entity_map);
  };
  for (const auto& p : list.pairs()) {
    const std::string a = lift(p.a, p.entity_a);
    const std::string b = lift(p.b, p.entity_b);
    if (a == b) {
      ++out.collapsed;
      continue;
    }
    auto ia = emb.find(a);
    auto ib = emb.find(b);
    if (!ia || !ib) {
      ++out.dropped;
      continue;
    }
    out.pairs.push_back(ordered(*ia, *ib));
  }
  const std::size_t before = out.pairs.size();
  normalize(out);
  out.collapsed += before - out.pairs.size();
  return out;
}

std::size_t Binning::index(double x) const {
  if (!(x > 0.0) || width <= 0.0) return 0;
  const double b = std::floor(x / width);
  if (b >= static_cast<double>(count - 1)) return count - 1;
  return static_cast<std::size_t>(b);
}

double max_pair_distance(const Embedding& emb) {
  const std::size_t n = emb.size();
  std::vector<double> block_max(kScanBlocks, 0.0);
  parallel_blocks(kScanBlocks, [&](std::size_t blk) {
    double m = 0.0;
    for (std::size_t i = blk; i < n; i += kScanBlocks) {
      for (std::size_t j = i + 1; j < n; ++j) {
        m = std::max(m, hyperbolic_distance(emb.coords[i], emb.coords[j]));
      }
    }
    block_max[blk] = m;
  });
  return *std::max_element(block_max.begin(), block_max.end());
}

Binning make_binning(const Embedding& emb, std::optional<double> bin_width) {
  if (bin_width && !(*bin_width > 0.0 && std::isfinite(*bin_width))) {
    throw ParameterError("bin width must be positive");
  }
  const double max_d = max_pair_distance(emb);
  Binning b;
  if (bin_width) {
    b.width = *bin_width;
  } else {
    b.width = max_d > 0.0 ? max_d / static_cast<double>(kDefaultBins) : 1.0;
  }
  const double bins = std::ceil(max_d / b.width);
  b.count = std::max<std::size_t>(1, static_cast<std::size_t>(bins));
  return b;
}

AssociationCurve binned_association_curve(const Embedding& emb, const PositiveSet& positives,
                                          AssociationKind kind, const Binning& binning) {
  if (positives.pairs.empty()) {
    throw DataError(std::string("no ") + std::string(to_string(kind)) +
                    " positives among embedded nodes; the baseline is undefined");
  }
  const std::size_t n = emb.size();
  const std::size_t nb = binning.count;
  std::vector<std::vector<std::size_t>> partial(kScanBlocks, std::vector<std::size_t>(nb, 0));
  parallel_blocks(kScanBlocks, [&](std::size_t blk) {
    auto& h = partial[blk];
    for (std::size_t i = blk; i < n; i += kScanBlocks) {
      for (std::size_t j = i + 1; j < n; ++j) ++h[binning.index(hyperbolic_distance(emb.coords[i], emb.coords[j]))];
    }
  });

  AssociationCurve curve;
  curve.kind = kind;
  curve.bin_width = binning.width;
  curve.dropped_positives = positives.dropped;
  curve.bins.resize(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    curve.bins[b].left = static_cast<double>(b) * binning.width;
    curve.bins[b].right = static_cast<double>(b + 1) * binning.width;
    for (const auto& h : partial) curve.bins[b].pairs += h[b];
  }
  for (auto [i, j] : positives.pairs) ++curve.bins[binning.index(hyperbolic_distance(emb.coords[i], emb.coords[j]))].positives;

  for (std::size_t b = 0; b < nb; ++b) {
    auto& bin = curve.bins[b];
    curve.total_pairs += bin.pairs;
    curve.total_positives += bin.positives;
    if (bin.pairs == 0) continue;
    if (kind == AssociationKind::merging && bin.positives == 0) {
      bin.suppressed = true;
      curve.suppressed_bins.push_back(b);
      continue;
    }
    bin.probability = static_cast<double>(bin.positives) / static_cast<double>(bin.pairs);
  }
  curve.baseline = static_cast<double>(curve.total_positives) / static_cast<double>(curve.total_pairs);
  return curve;
}

std::string canonical_activity(std::string_view activity) {
  std::string out;
  bool space = false;
  for (char c : activity) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = !out.empty();
      continue;
    }
    if (space) out.push_back(' ');
    space = false;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

Relation classify_relation(std::string_view a, std::string_view b) {
  const std::string ca = canonical_activity(a);
  const std::string cb = canonical_activity(b);
  if (ca.empty() || cb.empty() || ca == kUnknown || cb == kUnknown) return Relation::unknown;
  return ca == cb ? Relation::similar : Relation::complementary;
}

RelationBreakdown relation_histogram(const Embedding& emb, const PositiveSet& positives,
                                     const EntityMap& entity_map, const Binning& binning) {
  RelationBreakdown out;
  out.bin_width = binning.width;
  out.similar.assign(binning.count, 0);
  out.complementary.assign(binning.count, 0);
  out.unknown.assign(binning.count, 0);
  auto activity = [&](NodeId i) -> std::string {
    if (emb.level == Level::tld1) {
      if (const auto* rec = entity_map.find(emb.labels[i])) return rec->activity;
    }
    return i < emb.meta.size() ? emb.meta[i].activity : std::string(kUnknown);
  };
  for (auto [i, j] : positives.pairs) {
    const std::size_t b = binning.index(hyperbolic_distance(emb.coords[i], emb.coords[j]));
    switch (classify_relation(activity(i), activity(j))) {
      case Relation::similar: ++out.similar[b]; break;
      case Relation::complementary: ++out.complementary[b]; break;
      case Relation::unknown: ++out.unknown[b]; break;
    }
  }
  return out;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw DataError("correlation needs two equal series of length >= 2");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return sxy / std::sqrt(sxx * syy);
}

double spearman(std::span<const double> x, std::span<const double> y) {
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  return pearson(rx, ry);
}

void write_curve_csv(std::ostream& out, const AssociationCurve& curve) {
  out << "# kind=" << to_string(curve.kind) << " baseline=" << csv::number(curve.baseline)
      << " bin_width=" << csv::number(curve.bin_width) << " total_pairs=" << curve.total_pairs
      << " positives=" << curve.total_positives << " dropped_positives=" << curve.dropped_positives << '\n';
  out << "bin_left,bin_right,pairs,positives,probability,suppressed\n";
  for (const auto& b : curve.bins) {
    out << csv::number(b.left) << ',' << csv::number(b.right) << ',' << b.pairs << ',' << b.positives << ','
        << (b.probability ? csv::number(*b.probability) : std::string()) << ',' << (b.suppressed ? 1 : 0)
        << '\n';
  }
}

void write_relation_csv(std::ostream& out, const RelationBreakdown& breakdown) {
  out << "# bin_width=" << csv::number(breakdown.bin_width) << '\n';
  out << "bin_left,bin_right,similar,complementary,unknown\n";
  for (std::size_t b = 0; b < breakdown.similar.size(); ++b) {
    out << csv::number(static_cast<double>(b) * breakdown.bin_width) << ','
        << csv::number(static_cast<double>(b + 1) * breakdown.bin_width) << ',' << breakdown.similar[b] << ','
        << breakdown.complementary[b] << ',' << breakdown.unknown[b] << '\n';
  }
}

}  // namespace webgeo
