#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <random>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "support.hpp"
#include "webgeo/embedding.hpp"
#include "webgeo/errors.hpp"
#include "webgeo/hyperbolic.hpp"
#include "webgeo/synthetic.hpp"
#include "webgeo/topology.hpp"

using namespace webgeo;
using testing::graph;
using testing::vlabel;

namespace {

using Big = boost::multiprecision::cpp_bin_float_50;

// Textbook law of cosines in 50-digit arithmetic.
double distance_oracle(PolarCoordinate a, PolarCoordinate b) {
  const Big ra = a.r, rb = b.r;
  const Big dt = kPi - std::fabs(kPi - std::fabs(a.theta - b.theta));
  Big arg = cosh(ra) * cosh(rb) - sinh(ra) * sinh(rb) * cos(dt);
  if (arg < 1) arg = 1;
  return static_cast<double>(acosh(arg));
}

// Direct product of the pair probabilities, logged once at the end.
double likelihood_oracle(const DomainNetwork& net, const std::vector<PolarCoordinate>& c, double R, double T) {
  Big prod = 1;
  for (NodeId i = 0; i < net.size(); ++i) {
    for (NodeId j = i + 1; j < net.size(); ++j) {
      const Big ra = c[i].r, rb = c[j].r;
      const Big dt = kPi - std::fabs(kPi - std::fabs(c[i].theta - c[j].theta));
      Big arg = cosh(ra) * cosh(rb) - sinh(ra) * sinh(rb) * cos(dt);
      if (arg < 1) arg = 1;
      const Big e = exp((acosh(arg) - R) / (2 * Big(T)));
      prod *= net.has_edge(i, j) ? 1 / (1 + e) : e / (1 + e);
    }
  }
  return static_cast<double>(log(prod));
}

DomainNetwork graph_from_mask(std::size_t n, std::uint64_t mask) {
  std::map<std::pair<std::string, std::string>, std::size_t> e;
  for (std::size_t i = 0; i < n; ++i) e[{vlabel(i), vlabel(i)}] = 0;
  std::size_t bit = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j, ++bit) {
      if (mask >> bit & 1u) e[{vlabel(i), vlabel(j)}] = 1;
    }
  }
  return DomainNetwork::from_labelled_edges(Level::tld1, e);
}

double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

void set_threads(const char* v) {
  if (v) {
    setenv("WEBGEO_THREADS", v, 1);
  } else {
    unsetenv("WEBGEO_THREADS");
  }
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("distance special cases") {
  CHECK(hyperbolic_distance({3.0, 1.0}, {5.5, 1.0}) == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(hyperbolic_distance({0.0, 0.0}, {0.0, 2.0}) == 0.0);
  CHECK(hyperbolic_distance({2.0, 0.3}, {2.0, 0.3}) == 0.0);
  const double x = hyperbolic_distance({5.0, 0.0}, {5.0, kPi / 2.0});
  const double want = distance_oracle({5.0, 0.0}, {5.0, kPi / 2.0});
  CHECK(std::fabs(x - want) / want < 1e-10);
}

TEST_CASE("distance agrees with the extended-precision oracle") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> r(0.0, 25.0), t(0.0, kTwoPi);
  for (int i = 0; i < 2000; ++i) {
    PolarCoordinate a{r(rng), t(rng)}, b{r(rng), t(rng)};
    const double want = distance_oracle(a, b);
    const double got = hyperbolic_distance(a, b);
    CHECK(std::fabs(got - want) <= 1e-9 * std::max(1.0, want));
  }
}

TEST_CASE("distance is a metric on random triples") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> r(0.0, 20.0), t(0.0, kTwoPi);
  std::size_t violations = 0;
  for (int i = 0; i < 100000; ++i) {
    PolarCoordinate a{r(rng), t(rng)}, b{r(rng), t(rng)}, c{r(rng), t(rng)};
    const double ab = hyperbolic_distance(a, b), ba = hyperbolic_distance(b, a);
    const double bc = hyperbolic_distance(b, c), ac = hyperbolic_distance(a, c);
    if (ab != ba) ++violations;
    if (ac > ab + bc + 1e-9) ++violations;
    if (ab < 0.0) ++violations;
  }
  CHECK(violations == 0);
}

TEST_CASE("connection probability") {
  CHECK(connection_probability(7.0, 7.0, 0.3) == 0.5);
  CHECK(connection_probability(1e4, 7.0, 0.3) < 1e-9);
  const double R = 11.0, T = 0.45;
  CHECK(connection_probability(R + 2.0 * T * std::log(9.0), R, T) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK_THROWS_AS(connection_probability(1.0, 1.0, 0.0), ParameterError);
  CHECK_THROWS_AS(connection_probability(1.0, 1.0, 1.0), ParameterError);
  CHECK_THROWS_AS(connection_probability(1.0, 0.0, 0.5), ParameterError);
  double prev = 1.0;
  for (double x = 0.0; x < 40.0; x += 0.01) {
    const double p = connection_probability(x, 15.0, 0.5);
    CHECK(p > 0.0);
    CHECK(p < 1.0);
    CHECK(p <= prev);
    prev = p;
  }
}

TEST_CASE("likelihood examples") {
  SUBCASE("two nodes, one link at p = 1/2") {
    const auto net = graph({{"a", "b"}});
    std::vector<PolarCoordinate> c = {{0.0, 0.0}, {3.0, 0.0}};
    CHECK(log_likelihood(net, c, 3.0, 0.5) == doctest::Approx(std::log(0.5)).epsilon(1e-12));
  }
  SUBCASE("empty graph on three nodes at p = 1/2") {
    const auto net = graph_from_mask(3, 0);
    REQUIRE(net.size() == 3);
    std::vector<PolarCoordinate> c = {{2.0, 0.0}, {2.0, kTwoPi / 3.0}, {2.0, 2.0 * kTwoPi / 3.0}};
    const double R = hyperbolic_distance(c[0], c[1]);
    CHECK(log_likelihood(net, c, R, 0.5) == doctest::Approx(3.0 * std::log(0.5)).epsilon(1e-9));
  }
  SUBCASE("saturated pairs stay finite") {
    const auto net = graph({{"a", "b"}});
    std::vector<PolarCoordinate> c = {{30.0, 0.0}, {30.0, kPi}};
    LikelihoodDiagnostics d;
    const double ll = log_likelihood(net, c, 1.0, 0.01, &d);
    CHECK(std::isfinite(ll));
    CHECK(d.saturated_pairs == 1);
  }
}

TEST_CASE("likelihood equals the brute-force product on graphs up to 8 nodes") {
  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> r(0.0, 6.0), t(0.0, kTwoPi), temp(0.1, 0.9), rad(2.0, 9.0);
  auto check_graph = [&](const DomainNetwork& net) {
    std::vector<PolarCoordinate> c(net.size());
    for (auto& p : c) p = {r(rng), t(rng)};
    const double R = rad(rng), T = temp(rng);
    const double got = log_likelihood(net, c, R, T);
    CHECK(got <= 0.0);
    CHECK(std::fabs(got - likelihood_oracle(net, c, R, T)) <= 1e-9);
  };
  // every labelled graph up to five nodes
  for (std::size_t n = 2; n <= 5; ++n) {
    const std::uint64_t pairs = n * (n - 1) / 2;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs); ++mask) check_graph(graph_from_mask(n, mask));
  }
  for (std::size_t n = 6; n <= 8; ++n) {
    for (int k = 0; k < 300; ++k) check_graph(graph_from_mask(n, rng()));
  }
}

TEST_CASE("synthetic generator") {
  const auto a = generate_synthetic(500, 2.3, 0.4, 10.0, 17);
  const double k = 2.0 * static_cast<double>(a.network.edge_count()) / static_cast<double>(a.network.size());
  CHECK(k > 8.5);
  CHECK(k < 11.5);
  const auto b = generate_synthetic(500, 2.3, 0.4, 10.0, 17);
  CHECK(a.network.labels() == b.network.labels());
  CHECK(a.network.edges() == b.network.edges());
  for (std::size_t i = 0; i < a.truth.size(); ++i) {
    CHECK(a.truth.coords[i].r == b.truth.coords[i].r);
    CHECK(a.truth.coords[i].theta == b.truth.coords[i].theta);
    CHECK(a.truth.coords[i].r <= a.truth.radius);
  }
  CHECK_THROWS_AS(generate_synthetic(5, 2.3, 0.4, 3.0, 1), ParameterError);
  CHECK_THROWS_AS(generate_synthetic(100, 1.9, 0.4, 3.0, 1), ParameterError);
  CHECK_THROWS_AS(generate_synthetic(100, 2.5, 1.2, 3.0, 1), ParameterError);
}

TEST_CASE("lower temperature gives higher clustering") {
  const auto cold = generate_synthetic(500, 2.3, 0.01, 10.0, 5);
  const auto hot = generate_synthetic(500, 2.3, 0.9, 10.0, 5);
  CHECK(mean_clustering(cold.network) > mean_clustering(hot.network));
}

TEST_CASE("link frequency by true distance follows the connection probability") {
  const auto syn = generate_synthetic(600, 2.5, 0.5, 24.0, 31);
  REQUIRE(syn.network.size() == syn.generated_nodes);  // no conditioning on connectivity
  const auto coords = aligned_coordinates(syn.network, syn.truth);
  const double R = syn.truth.radius, T = syn.truth.temperature;
  const std::size_t bins = 20;
  double max_x = 0.0;
  const std::size_t n = syn.network.size();
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j) max_x = std::max(max_x, hyperbolic_distance(coords[i], coords[j]));
  std::vector<double> links(bins, 0.0), expect(bins, 0.0), var(bins, 0.0);
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = i + 1; j < n; ++j) {
      const double x = hyperbolic_distance(coords[i], coords[j]);
      const auto b = std::min<std::size_t>(bins - 1, static_cast<std::size_t>(x / max_x * bins));
      const double p = connection_probability(x, R, T);
      expect[b] += p;
      var[b] += p * (1.0 - p);
      links[b] += syn.network.has_edge(i, j) ? 1.0 : 0.0;
    }
  }
  for (std::size_t b = 0; b < bins; ++b) {
    if (var[b] < 1.0) continue;  // too few expected events for a normal band
    CHECK(std::fabs(links[b] - expect[b]) <= 3.0 * std::sqrt(var[b]));
  }
}

TEST_CASE("angle-averaged kernel matches quadrature") {
  for (double beta : {1.2, 2.5, 6.0, 15.0}) {
    const AveragedKernel k(beta);
    for (double c : {1e-4, 0.01, 0.3, 1.0, 4.0, 50.0, 1e4}) {
      auto f = [&](double th) { return 1.0 / (1.0 + std::pow(c * th, beta)); };
      // split at the knee so Simpson resolves it
      const double knee = std::min(kPi, 1.0 / c);
      double q = simpson(f, 0.0, knee, 20000);
      if (knee < kPi) q += simpson(f, knee, kPi, 200000);
      q /= kPi;
      CHECK(k(c) == doctest::Approx(q).epsilon(1e-6));
    }
  }
}

TEST_CASE("hidden-degree calibration reaches the observed degrees") {
  const auto syn = generate_synthetic(400, 2.4, 0.5, 8.0, 3);
  std::vector<std::size_t> deg(syn.network.size());
  for (NodeId u = 0; u < syn.network.size(); ++u) deg[u] = syn.network.degree(u);
  for (double beta : {1.5, 2.0, 5.0}) {
    const auto st = calibrate_hidden_degrees(deg, beta);
    CHECK(st.converged);
    const auto e = expected_degrees(st);
    for (std::size_t i = 0; i < deg.size(); ++i) {
      CHECK(std::fabs(e[i] - static_cast<double>(deg[i])) <= 0.02 * static_cast<double>(deg[i]));
      CHECK(st.hidden_degrees[i] > 0.0);
    }
  }
}

TEST_CASE("star graph: the hub is innermost") {
  std::vector<std::pair<std::string, std::string>> e;
  for (int i = 1; i <= 20; ++i) e.emplace_back("hub", vlabel(i));
  const auto star = graph(e);
  EmbeddingReport rep;
  const auto emb = infer_embedding(star, {}, &rep);
  const NodeId hub = *emb.find("hub");
  for (NodeId u = 0; u < emb.size(); ++u) {
    if (u != hub) CHECK(emb.coords[hub].r < emb.coords[u].r);
  }
  CHECK(rep.sweep_log_likelihood.empty() == false);
  CHECK(emb.log_likelihood >= rep.initial_log_likelihood);
}

TEST_CASE("embedding invariants and determinism") {
  const auto syn = generate_synthetic(150, 2.5, 0.5, 6.0, 8);
  EmbeddingConfig cfg;
  cfg.seed = 99;
  EmbeddingReport rep;
  set_threads("1");
  const auto a = infer_embedding(syn.network, cfg, &rep);
  set_threads("3");
  const auto b = infer_embedding(syn.network, cfg);
  set_threads(nullptr);
  REQUIRE(a.size() == b.size());
  CHECK(std::memcmp(a.coords.data(), b.coords.data(), a.size() * sizeof(PolarCoordinate)) == 0);
  CHECK(a.radius == b.radius);
  CHECK(a.temperature == b.temperature);
  CHECK(a.log_likelihood == b.log_likelihood);

  CHECK(a.radius > 0.0);
  CHECK(a.temperature > 0.0);
  CHECK(a.temperature < 1.0);
  for (const auto& c : a.coords) {
    CHECK(c.r >= 0.0);
    CHECK(c.r <= a.radius + 1e-9);
    CHECK(c.theta >= 0.0);
    CHECK(c.theta < kTwoPi);
  }
  const double again = log_likelihood(syn.network, a.coords, a.radius, a.temperature);
  CHECK(std::fabs(again - a.log_likelihood) <= 1e-6 * std::fabs(again));
  CHECK(a.log_likelihood >= rep.initial_log_likelihood);
  double prev = rep.initial_log_likelihood;
  for (double ll : rep.sweep_log_likelihood) {
    CHECK(ll >= prev - 1e-9 * std::fabs(prev));
    prev = ll;
  }
}

TEST_CASE("a refinement sweep never lowers the likelihood") {
  const auto syn = generate_synthetic(120, 2.5, 0.5, 6.0, 21);
  auto coords = aligned_coordinates(syn.network, syn.truth);
  std::mt19937_64 scramble(4);
  std::uniform_real_distribution<double> t(0.0, kTwoPi);
  for (auto& c : coords) c.theta = t(scramble);
  std::mt19937_64 rng(1);
  const double R = syn.truth.radius, T = syn.truth.temperature;
  double before = log_likelihood(syn.network, coords, R, T);
  for (int s = 0; s < 3; ++s) {
    const auto moved = refine_sweep(syn.network, coords, R, T, 16, rng);
    const double after = log_likelihood(syn.network, coords, R, T);
    CHECK(after >= before - 1e-9 * std::fabs(before));
    if (moved > 0) CHECK(after > before);
    before = after;
  }
  // one candidate means only the current angle: nothing moves
  const auto frozen = coords;
  CHECK(refine_sweep(syn.network, coords, R, T, 1, rng) == 0);
  CHECK(std::memcmp(frozen.data(), coords.data(), coords.size() * sizeof(PolarCoordinate)) == 0);
}

TEST_CASE("embedding preconditions") {
  CHECK_THROWS_AS(infer_embedding(graph({{"a", "b"}, {"b", "c"}})), DataError);
  std::vector<std::pair<std::string, std::string>> e;
  for (int i = 0; i < 12; ++i) e.emplace_back(vlabel(i), vlabel(i + 1));
  e.emplace_back("x", "y");
  CHECK_THROWS_AS(infer_embedding(graph(e)), DisconnectedError);
}

}
