#pragma once

#include <cstdint>

#include "webgeo/hyperbolic.hpp"
#include "webgeo/network.hpp"

namespace webgeo {

struct SyntheticNetwork {
  DomainNetwork network;  // largest connected component
  Embedding truth;        // coordinates of the component's nodes
  std::size_t generated_nodes = 0;
};

// Hyperbolic random graph with known coordinates.
//
// Hidden degrees are Pareto(gamma) so P(k) ∝ k^-gamma; angles are uniform;
// r_i = R - 2 ln(kappa_i / kappa_min), clamped at 0. R is solved so the
// expected mean degree over all pairs equals mean_degree, then every pair is
// linked independently with the Fermi-Dirac probability of its hyperbolic
// distance. Nodes are labelled "n0..", zero padded. Deterministic in seed.
SyntheticNetwork generate_synthetic(std::size_t n, double gamma, double temperature,
                                    double mean_degree, std::uint64_t seed);

}  // namespace webgeo
