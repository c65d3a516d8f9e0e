#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "webgeo/hyperbolic.hpp"
#include "webgeo/ingest.hpp"

namespace webgeo {

enum class AssociationKind { grouping, merging, cohosting };
std::string_view to_string(AssociationKind kind);

// Positive node pairs of an embedding, i < j, sorted and unique.
struct PositiveSet {
  std::vector<std::pair<NodeId, NodeId>> pairs;
  std::size_t dropped = 0;    // an endpoint is not embedded
  std::size_t collapsed = 0;  // both endpoints land on the same node after lifting
};

// Every pair of embedded nodes owned by the same legal entity. At entity level
// there are none by construction. TLD+1s absent from the map are their own
// entity and never group.
PositiveSet grouping_positives(const Embedding& emb, const EntityMap& entity_map);

// Pairs of a list, lifted to entity labels when the embedding is at entity level.
PositiveSet positives_from_pairs(const Embedding& emb, const PairList& list, const EntityMap& entity_map);

// Equal-width distance bins starting at 0; the last bin absorbs the maximum.
struct Binning {
  double width = 0.0;
  std::size_t count = 1;
  std::size_t index(double x) const;
};

double max_pair_distance(const Embedding& emb);
// width defaults to max distance / 40
Binning make_binning(const Embedding& emb, std::optional<double> bin_width);

struct AssociationBin {
  double left = 0.0;
  double right = 0.0;
  std::size_t pairs = 0;
  std::size_t positives = 0;
  std::optional<double> probability;  // empty when the bin has no pairs or is suppressed
  bool suppressed = false;
};

struct AssociationCurve {
  AssociationKind kind = AssociationKind::grouping;
  double bin_width = 0.0;
  std::vector<AssociationBin> bins;
  std::size_t total_pairs = 0;
  std::size_t total_positives = 0;
  double baseline = 0.0;  // total_positives / total_pairs
  std::vector<std::size_t> suppressed_bins;
  std::size_t dropped_positives = 0;
};

// Bins all N(N-1)/2 pairs by hyperbolic distance and counts positives per bin.
// For merging curves, bins holding pairs but no positive are suppressed.
// Throws DataError when there are no positives.
AssociationCurve binned_association_curve(const Embedding& emb, const PositiveSet& positives,
                                          AssociationKind kind, const Binning& binning);

enum class Relation { similar, complementary, unknown };
std::string_view to_string(Relation relation);

// Trimmed, lowercased, inner whitespace collapsed; "" and "unknown" mean unknown.
std::string canonical_activity(std::string_view activity);
Relation classify_relation(std::string_view a, std::string_view b);

struct RelationBreakdown {
  double bin_width = 0.0;
  std::vector<std::size_t> similar;
  std::vector<std::size_t> complementary;
  std::vector<std::size_t> unknown;
};

// Positives per distance bin split by activity relation. Node activity comes
// from the entity map at TLD+1 level and from the embedded metadata otherwise.
RelationBreakdown relation_histogram(const Embedding& emb, const PositiveSet& positives,
                                     const EntityMap& entity_map, const Binning& binning);

// Rank correlation with averaged ranks for ties; NaN when a side is constant.
double spearman(std::span<const double> x, std::span<const double> y);
double pearson(std::span<const double> x, std::span<const double> y);

void write_curve_csv(std::ostream& out, const AssociationCurve& curve);
void write_relation_csv(std::ostream& out, const RelationBreakdown& breakdown);

}  // namespace webgeo
