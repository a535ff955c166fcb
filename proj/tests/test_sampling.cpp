#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "critnoise/graph.hpp"
#include "critnoise/rng.hpp"
#include "critnoise/sampling.hpp"
#include "critnoise/stats.hpp"

using namespace critnoise;

namespace {

bool has_edge(const Graph& g, Vertex u, Vertex v) {
  return std::binary_search(g.edges.begin(), g.edges.end(),
                            std::make_pair(u, v));
}

}  // namespace

TEST_CASE("sprinkling parameters compose back to the target density") {
  Rng rng(1001);
  for (int i = 0; i < 10000; ++i) {
    const std::uint64_t n = 10 + rng.below(1000000000);
    const double lambda = 10.0 * rng.uniform01() - 5.0;
    const double eps = 0.999 * rng.uniform01() + 0.0005;
    const NoiseParams q = derive_noise_params(n, lambda, eps);
    const double recomposed = q.p0 + (1.0 - q.p0) * q.p1;
    CHECK(std::abs(recomposed - q.p) <= 1e-12 * q.p);
    CHECK(q.p1 == eps * q.p);
    CHECK(q.theta == doctest::Approx(1.0 - n * q.p0).epsilon(1e-12));
    CHECK(q.xi() ==
          doctest::Approx(q.theta * q.theta * q.theta * n).epsilon(1e-12));
  }
}

TEST_CASE("theta parametrization hits the requested core density") {
  for (const double theta : {0.05, 0.1, 0.3}) {
    const NoiseParams q = noise_params_from_theta(100000, 0.0, theta);
    CHECK(1.0 - 100000 * q.p0 == doctest::Approx(theta).epsilon(1e-10));
    CHECK(q.eps > 0.0);
    CHECK(q.eps < 1.0);
    const NoiseParams direct =
        derive_noise_params(100000, 0.0, q.eps);
    CHECK(direct.p0 == doctest::Approx(q.p0).epsilon(1e-12));
  }
}

TEST_CASE("parameter validation rejects out-of-range inputs") {
  CHECK_THROWS(derive_noise_params(1, 0.0, 0.1));
  CHECK_THROWS(derive_noise_params(100, 0.0, -0.1));
  CHECK_THROWS(derive_noise_params(100, 0.0, 1.5));
  CHECK_THROWS(noise_params_from_p(100, 0.0, 0.1));
  CHECK_THROWS(noise_params_from_p(100, 1.0, 0.1));
  CHECK_THROWS(noise_params_from_theta(100000, 0.0, 0.0));
  CHECK_THROWS(noise_params_from_theta(100000, 0.0, 1.0));
}

TEST_CASE("gnp samples are canonical with unbiased per-pair marginals") {
  const Vertex n = 30;
  const double p = 0.2;
  const int draws = 4000;
  std::vector<std::uint32_t> hits(pair_count(n), 0);
  for (int t = 0; t < draws; ++t) {
    Rng rng = derive_stream(600, t, StreamPurpose::core);
    const Graph g = sample_gnp(n, p, rng);
    REQUIRE(g.is_canonical());
    for (const auto& [u, v] : g.edges) ++hits[edge_index(u, v, n)];
  }
  // 435 five-sigma checks; the union bound leaves ~2.5e-4 flake mass.
  const double half = 5.0 * std::sqrt(p * (1 - p) / draws);
  for (const std::uint32_t h : hits) {
    const double freq = h / static_cast<double>(draws);
    CHECK(std::abs(freq - p) < half);
  }
}

TEST_CASE("gnp edge totals follow the binomial law") {
  const Vertex n = 10;
  const double p = 0.1;
  const int draws = 20000;
  std::vector<std::uint64_t> counts(46, 0);
  for (int t = 0; t < draws; ++t) {
    Rng rng = derive_stream(601, t, StreamPurpose::core);
    ++counts[sample_gnp(n, p, rng).edge_count()];
  }
  std::vector<double> expected(46);
  const std::uint64_t pairs = pair_count(n);
  for (std::uint64_t k = 0; k <= pairs; ++k) {
    const double lg = std::lgamma(46.0) - std::lgamma(k + 1.0) -
                      std::lgamma(46.0 - k);
    expected[k] =
        draws * std::exp(lg + k * std::log(p) + (pairs - k) * std::log1p(-p));
  }
  CHECK(chi_square_gof_pvalue(counts, expected) > 1e-4);
}

TEST_CASE("zero noise leaves the graph untouched") {
  const NoiseParams params = derive_noise_params(200, 0.0, 0.0);
  Rng core = derive_stream(9, 0, StreamPurpose::core);
  const Graph g = sample_gnp(200, params.p, core);
  Rng noise = derive_stream(9, 0, StreamPurpose::noise);
  const Graph g_eps = apply_noise(g, params, noise);
  CHECK(g_eps.edges == g.edges);
}

TEST_CASE("full noise forgets the graph") {
  const NoiseParams params = derive_noise_params(300, 0.0, 1.0);
  Rng core = derive_stream(10, 0, StreamPurpose::core);
  const Graph g = sample_gnp(300, params.p, core);
  double dot = 0.0;
  const int draws = 200;
  for (int t = 0; t < draws; ++t) {
    Rng noise = derive_stream(10, t, StreamPurpose::noise);
    const Graph h = apply_noise(g, params, noise);
    for (const auto& [u, v] : h.edges)
      if (has_edge(g, u, v)) dot += 1.0;
  }
  // Retained-edge count per draw is Binomial(|E|, p) when eps = 1.
  const double mean_keep = g.edge_count() * params.p * draws;
  CHECK(dot < mean_keep + 4 * std::sqrt(mean_keep) + 4);
}

TEST_CASE("noise joint law on a single pair matches the product form") {
  // One vertex pair, p = 1/2, eps = 0.3: P(both) = p(1 - eps + eps p).
  const NoiseParams params = noise_params_from_p(2, 0.5, 0.3);
  const int draws = 40000;
  std::vector<std::uint64_t> cells(4, 0);
  for (int t = 0; t < draws; ++t) {
    Rng core = derive_stream(602, t, StreamPurpose::core);
    const Graph g = sample_gnp(2, 0.5, core);
    Rng noise = derive_stream(602, t, StreamPurpose::noise);
    const Graph h = apply_noise(g, params, noise);
    const bool a = g.edge_count() == 1, b = h.edge_count() == 1;
    ++cells[(a ? 2 : 0) + (b ? 1 : 0)];
  }
  const double joint = 0.5 * (1 - 0.3 + 0.3 * 0.5);
  const double only = 0.5 - joint;
  std::vector<double> expected = {draws * (1 - 2 * only - joint),
                                  draws * only, draws * only, draws * joint};
  CHECK(chi_square_gof_pvalue(cells, expected) > 1e-4);
}

TEST_CASE("sprinkled pair and noisy pair share their single-slot law") {
  // The sprinkling route: core ~ p0, two independent p1 passes.  On one
  // vertex pair P(in g1 and g1_eps) = p0 + (1 - p0) p1^2, which the
  // composition identity turns into p (1 - eps + eps p).
  const NoiseParams params = noise_params_from_p(2, 0.5, 0.3);
  const int draws = 40000;
  std::vector<std::uint64_t> cells(4, 0);
  for (int t = 0; t < draws; ++t) {
    const SprinklingTriple tr = sample_sprinkling_triple(params, 603, t);
    const bool a = tr.g1.edge_count() == 1, b = tr.g1_eps.edge_count() == 1;
    ++cells[(a ? 2 : 0) + (b ? 1 : 0)];
  }
  const double joint = 0.5 * (1 - 0.3 + 0.3 * 0.5);
  const double only = 0.5 - joint;
  std::vector<double> expected = {draws * (1 - 2 * only - joint),
                                  draws * only, draws * only, draws * joint};
  CHECK(chi_square_gof_pvalue(cells, expected) > 1e-4);
  const double direct = params.p0 + (1 - params.p0) * params.p1 * params.p1;
  CHECK(direct == doctest::Approx(0.5 * (1 - 0.3 + 0.3 * 0.5)).epsilon(1e-12));
}

TEST_CASE("sprinkles only ever add edges on top of the core") {
  const NoiseParams params = derive_noise_params(500, 0.0, 0.4);
  const SprinklingTriple tr = sample_sprinkling_triple(params, 604, 0);
  CHECK(tr.core.is_canonical());
  CHECK(tr.g1.is_canonical());
  CHECK(tr.g1_eps.is_canonical());
  for (const auto& [u, v] : tr.core.edges) {
    CHECK(has_edge(tr.g1, u, v));
    CHECK(has_edge(tr.g1_eps, u, v));
  }
}

TEST_CASE("sprinkle marginal frequency matches p1") {
  const Vertex n = 40;
  const Graph core{n, {{0, 1}, {2, 3}}};
  const double p1 = 0.15;
  const int draws = 3000;
  std::uint64_t added = 0;
  for (int t = 0; t < draws; ++t) {
    Rng rng = derive_stream(605, t, StreamPurpose::sprinkle1);
    const Graph g = sprinkle_onto(core, p1, rng);
    CHECK(g.edge_count() >= core.edge_count());
    added += g.edge_count() - core.edge_count();
  }
  // Present core pairs never resample, so additions cover pairs - 2 slots.
  const double slots = static_cast<double>(pair_count(n) - 2) * draws;
  const double freq = added / slots;
  CHECK(std::abs(freq - p1) <
        4.0 * std::sqrt(p1 * (1 - p1) / slots));
}
