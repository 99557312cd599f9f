#include <doctest.h>

#include <cmath>
#include <set>

#include "coxeter/dynamics.hpp"
#include "coxeter/errors.hpp"

using namespace coxeter;

namespace {

ScoreVector halves(std::vector<int> v) {
  ScoreVector s;
  s.halves = std::move(v);
  return s;
}

InterchangeGraph c3(std::vector<int> s) { return build_interchange_graph(enumerate_fiber(RootType::C, 3, halves(s))); }

Rational probability(const std::map<std::pair<int, int>, Rational>& law, auto pred) {
  Rational acc(0);
  for (const auto& [pair, p] : law)
    if (pred(pair.first, pair.second)) acc += p;
  return acc;
}

}  // namespace

TEST_CASE("kernel rows are lazy and uniform over slots") {
  auto g = c3({0, 0, 0});
  WalkKernel k(g);
  CHECK(k.degree() == 7);
  for (int x = 0; x < g.num_vertices(); ++x) {
    auto row = k.row(x);
    Rational total(0);
    for (auto [y, p] : row) total += p;
    CHECK(total == Rational(1));
    CHECK(row[x] == Rational(1, 2));
    for (const auto& nb : g.neighbors(x)) CHECK(row[nb.vertex] == Rational(nb.multiplicity, 14));
    std::map<int, int> hits;
    for (int s = 0; s < k.degree(); ++s) ++hits[k.slot_target(x, s)];
    for (const auto& nb : g.neighbors(x)) CHECK(hits[nb.vertex] == nb.multiplicity);
  }
  CHECK_THROWS_AS(k.slot_target(0, 7), InvalidInput);
}

TEST_CASE("counter RNG") {
  CHECK(counter_hash(1, 2, 3, 4) == counter_hash(1, 2, 3, 4));
  CHECK(counter_hash(1, 2, 3, 4) != counter_hash(1, 2, 3, 5));
  CHECK(counter_hash(1, 2, 3, 4) != counter_hash(2, 2, 3, 4));
  std::vector<int> counts(7, 0);
  for (std::uint64_t s = 0; s < 70000; ++s) ++counts[counter_uniform(9, 0, s, 7)];
  for (int c : counts) CHECK(std::abs(c - 10000) < 500);
}

TEST_CASE("walks") {
  auto g = c3({0, 0, 0});
  WalkKernel k(g);
  CHECK(run_walk(k, 3, 0, 1) == std::vector<int>{3});
  auto a = run_walk(k, 0, 500, 42), b = run_walk(k, 0, 500, 42), c = run_walk(k, 0, 500, 43);
  CHECK(a == b);
  CHECK(a != c);
  CHECK(a.size() == 501);
  for (std::size_t t = 1; t < a.size(); ++t) CHECK((a[t] == a[t - 1] || g.multiplicity(a[t - 1], a[t]) > 0));
  auto occ = walk_occupancy(k, 0, 500, 42);
  long long total = 0;
  for (std::size_t v = 0; v < occ.size(); ++v) {
    total += occ[v];
    CHECK(occ[v] == std::count(a.begin() + 1, a.end(), static_cast<int>(v)));
  }
  CHECK(total == 500);
  CHECK_THROWS_AS(run_walk(k, 16, 1, 0), InvalidInput);

  auto single = build_interchange_graph(enumerate_fiber(RootType::C, 3, standard_score(RootType::C, 3)));
  WalkKernel ks(single);
  CHECK(run_walk(ks, 0, 5, 1) == std::vector<int>(6, 0));
}

TEST_CASE("occupancy over 1e5 steps on the tambourine is near uniform") {
  auto g = c3({0, 0, 0});
  WalkKernel k(g);
  const long long steps = 100000;
  auto occ = walk_occupancy(k, 0, steps, 2024);
  auto var = occupancy_variance(k, steps);
  const double mean = steps / 16.0, multinomial = steps * (1.0 / 16) * (15.0 / 16);
  for (int y = 0; y < 16; ++y) {
    CHECK(var[y] > multinomial);
    CHECK(std::abs(occ[y] - mean) <= 3 * std::sqrt(var[y]));
  }
}

TEST_CASE("occupancy variance matches repeated runs") {
  auto g = c3({4, 2, 2});
  WalkKernel k(g);
  const long long steps = 2000;
  const int runs = 400;
  auto var = occupancy_variance(k, steps);
  double sum = 0, sq = 0;
  for (int r = 0; r < runs; ++r) {
    // Start from a uniform state so the chain is stationary.
    int start = static_cast<int>(counter_uniform(5, 1000 + r, 0, 6));
    double c = static_cast<double>(walk_occupancy(k, start, steps, 5, r)[0]);
    sum += c;
    sq += c * c;
  }
  double mean = sum / runs, sample_var = sq / runs - mean * mean;
  CHECK(mean == doctest::Approx(steps / 6.0).epsilon(0.02));
  CHECK(sample_var == doctest::Approx(var[0]).epsilon(0.25));
}

TEST_CASE("TV curves") {
  auto g = c3({0, 0, 0});
  WalkKernel k(g);
  auto r = exact_tv_curve(k, 200);
  REQUIRE(r.tau.size() == 201);
  CHECK(r.tau[0] == doctest::Approx(1.0 - 1.0 / 16));
  CHECK(r.monotone);
  for (std::size_t t = 1; t < r.tau.size(); ++t) CHECK(r.tau[t] <= r.tau[t - 1] + 1e-15);
  CHECK(r.tau.back() < 1e-12);
  CHECK(r.spot_checks == 16 * 21);
  CHECK(r.max_spot_error < 1e-12);
  CHECK(r.t_mix == 5);
  CHECK_THROWS_AS(exact_tv_curve(k, -1), InvalidInput);
  auto csv = tv_curve_csv(r);
  CHECK(csv.rfind("t,tau\n0,", 0) == 0);

  auto single = build_interchange_graph(enumerate_fiber(RootType::C, 3, standard_score(RootType::C, 3)));
  WalkKernel ks(single);
  auto rs = exact_tv_curve(ks, 4);
  CHECK(rs.tau == std::vector<double>(5, 0.0));
  CHECK(mixing_time_exact(ks).t_mix == 0);
}

TEST_CASE("mixing times on C3") {
  CHECK(mixing_time_exact(WalkKernel(c3({4, 2, 2}))).t_mix == 4);
  CHECK(mixing_time_exact(WalkKernel(c3({-2, 0, 2}))).t_mix == 6);
  for (auto& f : enumerate_all_fibers(RootType::C, 3)) {
    auto g = build_interchange_graph(f);
    WalkKernel k(g);
    auto r = mixing_time_exact(k);
    auto full = exact_tv_curve(k, r.t_mix);
    CHECK(r.monotone);
    CHECK(full.tau.back() <= 0.25);
    if (r.t_mix > 0) CHECK(full.tau[r.t_mix - 1] > 0.25);
  }
}

TEST_CASE("weighted metric") {
  auto g = c3({4, 2, 2});
  WeightedMetric w(g, 1);
  CHECK(w.edge_units(1) == 2);
  CHECK(w.edge_units(2) == 1);
  for (const auto& e : g.edges()) CHECK(w.weight(e.u, e.v) == (e.multiplicity == 2 ? Rational(1) : Rational(2)));
  WeightedMetric plain(g, 0);
  auto dist = bfs_distances(g, 0);
  for (int v = 0; v < g.num_vertices(); ++v) CHECK(plain.distance(0, v) == Rational(dist[v]));
  CHECK(plain.diameter() == Rational(graph_metrics(g).diameter));
  for (int a = 0; a < g.num_vertices(); ++a)
    for (int b = 0; b < g.num_vertices(); ++b)
      for (int c = 0; c < g.num_vertices(); ++c) CHECK(w.distance(a, c) <= w.distance(a, b) + w.distance(b, c));
}

TEST_CASE("psi is a bijection with correct marginals on every C3, B3, D3 pair") {
  for (RootType t : {RootType::B, RootType::C, RootType::D})
    for (auto& f : enumerate_all_fibers(t, 3)) {
      auto g = build_interchange_graph(f);
      if (g.num_vertices() < 2) continue;
      auto stats = crystal_statistics(g);
      WalkKernel k(g);
      for (const auto& e : g.edges())
        for (auto [u, v] : {std::pair{e.u, e.v}, std::pair{e.v, e.u}}) {
          auto psi = edge_pairing_psi(g, stats, u, v);
          CHECK(psi.from.size() == static_cast<std::size_t>(k.degree()));
          std::set<Slot> from(psi.from.begin(), psi.from.end()), to(psi.to.begin(), psi.to.end());
          CHECK(from.size() == psi.from.size());
          CHECK(to.size() == psi.to.size());
          CHECK(marginals_match(k, psi));
        }
    }
}

TEST_CASE("coupling probabilities and expectations") {
  std::map<CouplingCase, int> seen;
  for (auto& f : enumerate_all_fibers(RootType::C, 3)) {
    auto g = build_interchange_graph(f);
    if (g.num_vertices() < 2) continue;
    auto stats = crystal_statistics(g);
    WalkKernel k(g);
    const int gamma = stats.gamma;
    WeightedMetric metric(g, gamma);
    const Rational d(k.degree());
    for (const auto& e : g.edges()) {
      auto psi = edge_pairing_psi(g, stats, e.u, e.v);
      ++seen[psi.kind];
      auto law = coupling_distribution(k, psi);
      auto meet = probability(law, [](int a, int b) { return a == b; });
      auto doubled = probability(law, [&](int a, int b) { return g.multiplicity(a, b) == 2; });
      Rational expect = expected_coupled_weight(k, psi, metric);
      Rational w = metric.weight(e.u, e.v);
      CHECK(expect == expected_weight_formula(psi, k.degree()));
      switch (psi.kind) {
        case CouplingCase::Unweighted:
          CHECK(meet == Rational(e.multiplicity) / d);
          CHECK(expect == (Rational(1) - Rational(e.multiplicity) / d) * w);
          break;
        case CouplingCase::Case1a:
          CHECK(meet == Rational(1) / d);
          CHECK(expect == (Rational(1) - Rational(1) / d) * w);
          break;
        case CouplingCase::Case1b:
          CHECK(meet.numerator() == 0);
          CHECK(doubled == Rational(2) / d);
          CHECK(expect == (Rational(1) - Rational(2) / (d * Rational(1 + gamma))) * Rational(gamma + 1, gamma));
          break;
        case CouplingCase::Case2:
          CHECK(meet == Rational(2) / d);
          CHECK(expect == Rational(1) - Rational(2 * gamma - psi.gamma_prime) / (d * Rational(gamma)));
          CHECK(expect <= (Rational(1) - Rational(1) / d) * w);
          if (psi.gamma_prime == gamma) CHECK(expect == Rational(1) - Rational(1) / d);
          break;
      }
    }
  }
  CHECK(seen[CouplingCase::Unweighted] > 0);
  CHECK(seen[CouplingCase::Case1b] > 0);
  CHECK(seen[CouplingCase::Case2] > 0);
}

TEST_CASE("case 1b on the snare drum sends crystal single edges to a double edge") {
  auto g = c3({-2, 0, 2});
  auto stats = crystal_statistics(g);
  REQUIRE(stats.gamma == 1);
  int found = 0;
  for (const auto& e : g.edges()) {
    auto psi = edge_pairing_psi(g, stats, e.u, e.v);
    if (psi.kind != CouplingCase::Case1b) continue;
    ++found;
    for (std::size_t i = 0; i < psi.from.size(); ++i) {
      int a = psi.from[i].neighbor, b = psi.to[i].neighbor;
      if (g.multiplicity(a, b) == 2) CHECK(g.multiplicity(psi.u, a) + g.multiplicity(psi.v, b) == 3);
    }
  }
  CHECK(found > 0);
}

TEST_CASE("coupled steps follow the exact law") {
  auto g = c3({4, 2, 2});
  auto stats = crystal_statistics(g);
  WalkKernel k(g);
  const auto e = g.edges().front();
  auto psi = edge_pairing_psi(g, stats, e.u, e.v);
  auto law = coupling_distribution(k, psi);
  std::map<std::pair<int, int>, int> counts;
  const int trials = 40000;
  for (int s = 0; s < trials; ++s) ++counts[coupled_step(k, psi, 77, s)];
  for (const auto& [pair, c] : counts) {
    REQUIRE(law.count(pair));
    double p = boost::rational_cast<double>(law.at(pair));
    CHECK(std::abs(c - p * trials) <= 4 * std::sqrt(trials * p * (1 - p)) + 1);
  }
  CHECK(coupled_step(k, psi, 77, 5) == coupled_step(k, psi, 77, 5));
  CHECK_THROWS_AS(edge_pairing_psi(g, stats, 0, 0), InvalidInput);
}

TEST_CASE("coupling verification on small fibers") {
  for (RootType t : {RootType::B, RootType::C, RootType::D})
    for (auto& f : enumerate_all_fibers(t, 3)) {
      auto g = build_interchange_graph(f);
      auto check = verify_coupling(g, crystal_statistics(g));
      CHECK(check.formula_mismatches == 0);
      CHECK(check.marginal_failures == 0);
      CHECK(check.contraction_failures == 0);
      if (g.num_vertices() < 2 || check.gamma > 0) continue;
      int lightest = 2;
      for (const auto& e : g.edges()) lightest = std::min(lightest, e.multiplicity);
      CHECK(check.alpha_min == Rational(lightest, graph_metrics(g).regular_degree));
    }
}
