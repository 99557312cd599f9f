#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "coxeter/errors.hpp"
#include "coxeter/interchange.hpp"
#include "oracle.hpp"

using namespace coxeter;

namespace {

const char* kTypes = "BCD";

RootType root(char c) { return parse_root_type(std::string(1, c)); }

ScoreVector halves(std::vector<int> v) {
  ScoreVector s;
  s.halves = std::move(v);
  return s;
}

// Brute force over all orientations, grouped by score.
std::map<std::vector<int>, std::vector<std::uint64_t>> brute_fibers(char type, int n) {
  auto gs = oracle::games(type, n);
  std::map<std::vector<int>, std::vector<std::uint64_t>> out;
  for (std::uint64_t bits = 0; bits < (1ULL << gs.size()); ++bits) out[oracle::halves(gs, n, bits)].push_back(bits);
  return out;
}

std::vector<std::vector<int>> edge_matrix(int multiplicity) { return {{0, multiplicity}, {multiplicity, 0}}; }

}  // namespace

TEST_CASE("fiber enumeration matches brute force") {
  for (const char* p = kTypes; *p; ++p)
    for (int n = 1; n <= 3; ++n) {
      auto brute = brute_fibers(*p, n);
      auto fibers = enumerate_all_fibers(root(*p), n);
      REQUIRE(fibers.size() == brute.size());
      for (const auto& f : fibers) {
        auto it = brute.find(f.score.halves);
        REQUIRE(it != brute.end());
        std::vector<std::uint64_t> got(f.tournaments.begin(), f.tournaments.end());
        CHECK(got == it->second);
        for (int k = 0; k < f.size(); ++k) CHECK(f.index_of(f.tournaments[k]) == k);
      }
      std::vector<ScoreVector> set = enumerate_score_set(root(*p), n);
      CHECK(set.size() == brute.size());
    }
}

TEST_CASE("fiber examples") {
  CHECK(enumerate_fiber(RootType::C, 3, halves({0, 0, 0})).size() == 16);
  CHECK(enumerate_fiber(RootType::D, 2, halves({0, 0})).empty());
  for (RootType t : {RootType::A, RootType::B, RootType::C, RootType::D}) {
    auto f = enumerate_fiber(t, 3, standard_score(t, 3));
    REQUIRE(f.size() == 1);
    CHECK(f.tournaments[0] == build_complete_graph(t, 3)->all_games());
  }
  CHECK_THROWS_AS(enumerate_fiber(RootType::C, 5, halves({0, 0, 0, 0, 0})), CapExceeded);
  CHECK_THROWS_AS(enumerate_fiber(RootType::C, 3, halves({0, 0})), InvalidInput);
  CHECK_THROWS_AS(build_interchange_graph(enumerate_fiber(RootType::C, 3, halves({1, 0, 0}))), InfeasibleScore);
}

TEST_CASE("score sets") {
  auto d2 = enumerate_score_set(RootType::D, 2);
  std::set<std::vector<int>> got;
  for (const auto& s : d2) got.insert(s.halves);
  CHECK(got == std::set<std::vector<int>>{{2, 0}, {-2, 0}, {0, 2}, {0, -2}});
  auto b1 = enumerate_score_set(RootType::B, 1);
  REQUIRE(b1.size() == 2);
  CHECK(b1[0].halves == std::vector<int>{-1});
  CHECK(b1[1].halves == std::vector<int>{1});
  auto c3 = enumerate_score_set(RootType::C, 3);
  for (auto s : {halves({4, 2, 2}), halves({-2, 0, 2}), halves({0, 0, 0})})
    CHECK(std::binary_search(c3.begin(), c3.end(), s));
}

TEST_CASE("score set at n = 4 matches brute force") {
  for (const char* p = kTypes; *p; ++p) {
    auto brute = brute_fibers(*p, 4);
    auto set = enumerate_score_set(root(*p), 4);
    REQUIRE(set.size() == brute.size());
    for (const auto& s : set) CHECK(brute.count(s.halves));
  }
}

TEST_CASE("interchange graph edges match brute-force neighbours") {
  for (const char* p = kTypes; *p; ++p)
    for (int n = 2; n <= 3; ++n) {
      auto gs = oracle::games(*p, n);
      for (auto& f : enumerate_all_fibers(root(*p), n)) {
        auto g = build_interchange_graph(f);
        for (int v = 0; v < g.num_vertices(); ++v) {
          std::vector<std::pair<std::uint64_t, int>> got;
          for (const auto& nb : g.neighbors(v)) got.push_back({g.fiber().tournaments[nb.vertex], nb.multiplicity});
          auto want = oracle::neighbours(gs, n, g.fiber().tournaments[v]);
          std::sort(got.begin(), got.end());
          std::sort(want.begin(), want.end());
          CHECK(got == want);
        }
      }
    }
}

TEST_CASE("regular, connected, bounded diameter") {
  for (const char* p = kTypes; *p; ++p)
    for (int n = 1; n <= 4; ++n) {
      const int m = build_complete_graph(root(*p), n)->num_games();
      for (auto& f : enumerate_all_fibers(root(*p), n)) {
        const long long d = degree_formula(root(*p), n, f.score);
        auto g = build_interchange_graph(f);
        auto metrics = graph_metrics(g);
        CHECK(metrics.regular_degree == d);
        CHECK(metrics.connected);
        CHECK(metrics.diameter <= std::max(m - 2, 0));
      }
    }
}

TEST_CASE("single vertex fiber") {
  auto g = build_interchange_graph(enumerate_fiber(RootType::C, 3, standard_score(RootType::C, 3)));
  auto m = graph_metrics(g);
  CHECK(m.num_vertices == 1);
  CHECK(m.connected);
  CHECK(m.diameter == 0);
  CHECK(m.regular_degree == 0);
}

TEST_CASE("golden C3 graphs") {
  auto crystal = build_interchange_graph(enumerate_fiber(RootType::C, 3, halves({4, 2, 2})));
  auto cm = graph_metrics(crystal);
  CHECK(cm.num_vertices == 6);
  CHECK(cm.regular_degree == 4);
  CHECK(cm.diameter == 3);
  const auto crystal_matrix = multiplicity_matrix(crystal);

  auto tambourine = build_interchange_graph(enumerate_fiber(RootType::C, 3, halves({0, 0, 0})));
  auto cube = cartesian_product(cartesian_product(edge_matrix(2), edge_matrix(2)), edge_matrix(2));
  CHECK(graph_metrics(tambourine).regular_degree == 7);
  CHECK(isomorphic(multiplicity_matrix(tambourine), cartesian_product(edge_matrix(1), cube)));
  CHECK_FALSE(isomorphic(multiplicity_matrix(tambourine), cartesian_product(edge_matrix(2), cube)));

  auto drum = build_interchange_graph(enumerate_fiber(RootType::C, 3, halves({-2, 0, 2})));
  CHECK(drum.num_vertices() == 12);
  CHECK(isomorphic(multiplicity_matrix(drum), cartesian_product(edge_matrix(2), crystal_matrix)));
  CHECK_FALSE(isomorphic(multiplicity_matrix(drum), cartesian_product(edge_matrix(1), crystal_matrix)));
}

TEST_CASE("isomorphism helper") {
  std::vector<std::vector<int>> path{{0, 1, 0}, {1, 0, 2}, {0, 2, 0}};
  std::vector<std::vector<int>> path2{{0, 2, 1}, {2, 0, 0}, {1, 0, 0}};
  std::vector<std::vector<int>> path3{{0, 1, 1}, {1, 0, 0}, {1, 0, 0}};
  CHECK(isomorphic(path, path2));
  CHECK_FALSE(isomorphic(path, path3));
  CHECK(cartesian_product(edge_matrix(1), edge_matrix(1)).size() == 4);
}

TEST_CASE("network census over n = 3") {
  std::map<char, NetworkCensus> totals;
  for (const char* p = kTypes; *p; ++p)
    for (auto& f : enumerate_all_fibers(root(*p), 3)) {
      auto g = build_interchange_graph(f);
      auto c = network_census(g, distance_two_pairs(g));
      auto& t = totals[*p];
      t.pairs += c.pairs;
      t.unclassified += c.unclassified;
      t.inconsistent += c.inconsistent;
      for (auto [k, v] : c.by_projection) t.by_projection[k] += v;
    }
  for (auto& [type, c] : totals) {
    CAPTURE(type);
    CHECK(c.pairs > 0);
    CHECK(c.unclassified == 0);
    CHECK(c.inconsistent == 0);
    for (auto [key, count] : c.by_projection) {
      auto [proj, cls] = key;
      if (type != 'C') CHECK((cls == NetworkClass::SingleDiamond || proj == ProjectionClass::Disjoint));
      if (proj == ProjectionClass::Tent && type == 'C') CHECK(cls == NetworkClass::SplitDiamond);
      if (proj == ProjectionClass::Hanger)
        CHECK((cls == NetworkClass::DoubleDiamond || cls == NetworkClass::HeavyDiamond));
      if (proj == ProjectionClass::Square) CHECK(cls == NetworkClass::SingleDiamond);
    }
  }
  CHECK(totals['B'].by_projection.count({ProjectionClass::Fork, NetworkClass::SingleDiamond}));
  CHECK(totals['C'].by_projection.count({ProjectionClass::Tent, NetworkClass::SplitDiamond}));
  CHECK(totals['C'].by_projection.count({ProjectionClass::Hanger, NetworkClass::HeavyDiamond}));
  CHECK(totals['C'].by_projection.count({ProjectionClass::Disjoint, NetworkClass::QuadrupleDiamond}));
}

TEST_CASE("signatures") {
  CHECK(classify_signature({{1, 1}, {1, 1}}) == NetworkClass::SingleDiamond);
  CHECK(classify_signature({{1, 2}, {2, 1}}) == NetworkClass::DoubleDiamond);
  CHECK(classify_signature({{2, 2}, {2, 2}}) == NetworkClass::QuadrupleDiamond);
  CHECK(classify_signature({{1, 1}, {1, 1}, {2, 2}}) == NetworkClass::SplitDiamond);
  CHECK(classify_signature(heavy_diamond_signature()) == NetworkClass::HeavyDiamond);
  CHECK(classify_signature({{1, 1}}) == NetworkClass::Unclassified);
  Network net{0, 1, {2, 3}, {{2, 1}, {2, 1}}};
  CHECK(network_signature(net) == heavy_diamond_signature());
}

TEST_CASE("networks reject pairs not at distance two") {
  auto g = build_interchange_graph(enumerate_fiber(RootType::C, 3, halves({4, 2, 2})));
  int far = -1;
  auto dist = bfs_distances(g, 0);
  for (int v = 0; v < g.num_vertices(); ++v)
    if (dist[v] == 1) far = v;
  CHECK_THROWS_AS(interchange_network(g, 0, far), InvalidInput);
  CHECK_THROWS_AS(interchange_network(g, 0, 0), InvalidInput);
}

TEST_CASE("extended networks and crystals, n <= 3 and D4") {
  std::vector<std::pair<char, int>> cases{{'B', 3}, {'C', 3}, {'D', 3}, {'D', 4}};
  for (auto [type, n] : cases)
    for (auto& f : enumerate_all_fibers(root(type), n)) {
      auto g = build_interchange_graph(f);
      auto r = extended_networks_and_crystals(g);
      CAPTURE(type);
      CAPTURE(to_string(f.score));
      CHECK(r.stable_violations == 0);
      CHECK(r.crystal_shape_violations == 0);
      CHECK(r.shared_edge_violations == 0);
      CHECK(r.crystal_single_edge_shares == 0);
      CHECK(r.crystal_degree_violations == 0);
      CHECK(r.sharper_bound_violations == 0);
      CHECK(r.crystals.gamma <= 2 * (n - 2));
      if (type != 'C') CHECK(r.crystals.crystals.empty());
      for (const auto& c : r.crystals.crystals) CHECK(has_crystal_shape(c));
    }
}

TEST_CASE("the crystal fiber is one crystal") {
  auto g = build_interchange_graph(enumerate_fiber(RootType::C, 3, halves({4, 2, 2})));
  auto stats = crystal_statistics(g);
  REQUIRE(stats.crystals.size() == 1);
  CHECK(stats.crystals[0].vertices.size() == 6);
  CHECK(stats.crystals[0].edges.size() == g.edges().size());
  CHECK(stats.gamma == 1);
  auto tamb = build_interchange_graph(enumerate_fiber(RootType::C, 3, halves({0, 0, 0})));
  CHECK(crystal_statistics(tamb).gamma == 0);
  auto csv = crystal_statistics_csv(g, stats);
  CHECK(csv.rfind("u,v,crystal_degree\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + static_cast<long>(stats.double_edge_degree.size()));
}

TEST_CASE("extended network cap") {
  auto g = build_interchange_graph(enumerate_fiber(RootType::C, 3, halves({4, 2, 2})));
  auto pairs = distance_two_pairs(g);
  REQUIRE_FALSE(pairs.empty());
  CHECK_THROWS_AS(extended_network(g, pairs[0].first, pairs[0].second, 3), CapExceeded);
}

TEST_CASE("graph export") {
  auto g = build_interchange_graph(enumerate_fiber(RootType::C, 3, halves({-2, 0, 2})));
  auto j = graph_to_json(g);
  CHECK(j["type"] == "C");
  CHECK(j["n"] == 3);
  CHECK(j["vertices"].size() == 12);
  int weighted = 0;
  for (const auto& e : j["edges"]) weighted += e[2].get<int>();
  CHECK(weighted * 2 == 12 * graph_metrics(g).regular_degree);
  auto dot = graph_to_dot(g);
  CHECK(dot.rfind("graph interchange {", 0) == 0);
  const std::string edge = " -- ";
  long lines = 0;
  for (auto pos = dot.find(edge); pos != std::string::npos; pos = dot.find(edge, pos + 1)) ++lines;
  CHECK(lines == weighted);
}
