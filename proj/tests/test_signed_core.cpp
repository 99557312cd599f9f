#include <doctest.h>

#include <random>

#include "coxeter/errors.hpp"
#include "coxeter/signed_core.hpp"
#include "oracle.hpp"

using namespace coxeter;

TEST_CASE("game counts per type") {
  CHECK(build_complete_graph(RootType::C, 3)->num_games() == 9);
  CHECK(build_complete_graph(RootType::D, 3)->num_games() == 6);
  CHECK(build_complete_graph(RootType::B, 1)->num_games() == 1);
  CHECK(build_complete_graph(RootType::A, 4)->num_games() == 6);
  CHECK_THROWS_AS(build_complete_graph(RootType::B, 0), InvalidInput);
  CHECK_THROWS_AS(build_complete_graph(RootType::C, 9), InvalidInput);
}

TEST_CASE("canonical ordering matches the reference enumeration") {
  for (char t : {'A', 'B', 'C', 'D'}) {
    auto g = build_complete_graph(parse_root_type(std::string(1, t)), 4);
    auto ref = oracle::games(t, 4);
    REQUIRE(g->num_games() == static_cast<int>(ref.size()));
    for (int k = 0; k < g->num_games(); ++k) {
      CHECK(static_cast<int>(g->game(k).kind) == ref[k].kind);
      CHECK(g->game(k).first == ref[k].a);
      CHECK(g->game(k).second == ref[k].b);
    }
  }
}

TEST_CASE("game vectors") {
  auto c2 = build_complete_graph(RootType::C, 2);
  auto neg = *c2->negative_id(1, 0);
  CHECK(game_vector(c2->game(neg), 2).halves == std::vector<int>{-1, 1});
  CHECK(game_vector(c2->game(*c2->loop_id(0)), 2).halves == std::vector<int>{2, 0});
  auto b3 = build_complete_graph(RootType::B, 3);
  CHECK(game_vector(b3->game(*b3->half_id(2)), 3).halves == std::vector<int>{0, 0, 1});
  CHECK_THROWS_AS(game_vector(b3->game(*b3->half_id(2)), 2), InvalidInput);
}

TEST_CASE("standard scores agree with direct summation") {
  for (char t : {'A', 'B', 'C', 'D'})
    for (int n = 1; n <= 5; ++n) {
      auto ref = oracle::games(t, n);
      auto s = standard_score(parse_root_type(std::string(1, t)), n);
      CHECK(s.halves == oracle::halves(ref, n, (1ULL << ref.size()) - 1));
    }
  CHECK(standard_score(RootType::B, 3).halves == std::vector<int>{1, 3, 5});
  CHECK(standard_score(RootType::C, 3).halves == std::vector<int>{2, 4, 6});
  CHECK(standard_score(RootType::D, 3).halves == std::vector<int>{0, 2, 4});
}

TEST_CASE("score, reversal and global antisymmetry") {
  std::mt19937_64 rng(7);
  for (RootType type : {RootType::B, RootType::C, RootType::D}) {
    auto g = build_complete_graph(type, 4);
    auto ref = oracle::games(to_char(type), 4);
    for (int rep = 0; rep < 200; ++rep) {
      GameSet bits = rng() & g->all_games();
      GameSet x = rng() & g->all_games();
      Tournament t(g, bits);
      CHECK(score(t).halves == oracle::halves(ref, 4, bits));
      Tournament star = reverse_subset(t, g->all_games());
      CHECK(score(star) == -score(t));
      CHECK(reverse_subset(reverse_subset(t, x), x) == t);
      auto a = score(reverse_subset(t, x));
      auto b = score(reverse_subset(star, x));
      CHECK((a == -b));
      if (oracle::neutral(ref, 4, bits, x)) CHECK(score(reverse_subset(t, x)) == score(t));
    }
    Tournament t(g, 0);
    CHECK(reverse_subset(t, 0) == t);
    CHECK_THROWS_AS(reverse_subset(t, GameSet{1} << g->num_games()), InvalidInput);
  }
}

TEST_CASE("degree formula") {
  CHECK(degree_formula(RootType::C, 3, parse_score("0,0,0")) == 7);
  CHECK(degree_formula(RootType::C, 3, parse_score("4,2,2")) == 4);
  CHECK(degree_formula(RootType::C, 3, parse_score("2,4,6")) == 0);
  CHECK_THROWS_AS(degree_formula(RootType::C, 3, parse_score("9,9,9")), InfeasibleScore);
  CHECK_THROWS_AS(degree_formula(RootType::C, 3, parse_score("1,0,0")), InfeasibleScore);
  CHECK_THROWS_AS(degree_formula(RootType::C, 3, parse_score("0,0")), InvalidInput);
}

TEST_CASE("serialization round trip") {
  auto g = build_complete_graph(RootType::C, 3);
  Tournament t(g, 0b110011010);
  auto j = to_json(t);
  CHECK(j["w"] == "010110011");
  CHECK(tournament_from_json(j) == t);
  CHECK(tournament_from_json(nlohmann::json::parse(j.dump())) == t);
  CHECK_THROWS_AS(tournament_from_json(nlohmann::json{{"type", "C"}, {"n", 3}, {"w", "01"}}), InvalidInput);
  CHECK_THROWS_AS(tournament_from_json(nlohmann::json{{"type", "Q"}, {"n", 3}, {"w", "0"}}), InvalidInput);
  CHECK(parse_score(" -2, 0 ,+2").halves == std::vector<int>{-2, 0, 2});
  CHECK_THROWS_AS(parse_score("1,,2"), InvalidInput);
}
