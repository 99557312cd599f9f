#pragma once

// Complete signed graphs, Coxeter tournaments and score sequences.
//
// Players are 0-based internally and 1-based in every user-facing string.
// Scores are kept in half-units: a ScoreVector stores 2*s, so every
// quantity below is an integer.

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace coxeter {

enum class RootType { A, B, C, D };

char to_char(RootType type);
RootType parse_root_type(std::string_view text);

enum class GameKind { Negative, Positive, Half, Loop };

std::string_view to_string(GameKind kind);

/// Bit i refers to the game with id i of a CompleteSignedGraph.
using GameSet = std::uint64_t;

inline constexpr int kMaxGames = 64;

inline int game_count(GameSet set) { return __builtin_popcountll(set); }
inline bool contains(GameSet set, int id) { return (set >> id) & 1U; }

struct Game {
  int id = 0;
  GameKind kind = GameKind::Negative;
  int first = 0;    // larger player; the only player of a Half/Loop game
  int second = -1;  // smaller player, -1 for Half/Loop

  bool involves(int player) const { return first == player || second == player; }
  bool is_pair() const { return second >= 0; }
  /// Contribution of a won game to the score, in half-units, at `player`.
  int win_value(int player) const;
};

struct ScoreVector {
  std::vector<int> halves;

  int size() const { return static_cast<int>(halves.size()); }
  long long squared_norm() const;
  bool is_zero() const;
  ScoreVector operator-() const;

  friend bool operator==(const ScoreVector&, const ScoreVector&) = default;
  friend auto operator<=>(const ScoreVector&, const ScoreVector&) = default;
};

std::string to_string(const ScoreVector& score);
/// Parses "a,b,c" (half-units).
ScoreVector parse_score(std::string_view text);

class CompleteSignedGraph {
 public:
  CompleteSignedGraph(RootType type, int n);

  RootType root_type() const { return type_; }
  int n() const { return n_; }
  int num_games() const { return static_cast<int>(games_.size()); }
  std::span<const Game> games() const { return games_; }
  const Game& game(int id) const;
  GameSet all_games() const { return all_; }
  /// Games that involve `player`.
  GameSet incident(int player) const { return incident_[player]; }

  std::optional<int> negative_id(int i, int j) const;
  std::optional<int> positive_id(int i, int j) const;
  std::optional<int> half_id(int i) const;
  std::optional<int> loop_id(int i) const;

  /// Half-unit score contribution of a won game at every player.
  std::span<const int> win_vector(int id) const {
    return {win_vectors_.data() + static_cast<std::size_t>(id) * n_, static_cast<std::size_t>(n_)};
  }

  /// Score of the orientation `bits` restricted to `subset`.
  ScoreVector subset_score(GameSet bits, GameSet subset) const;
  ScoreVector score(GameSet bits) const { return subset_score(bits, all_); }
  bool is_neutral(GameSet bits, GameSet subset) const;

  /// Players touched by the games in `subset`.
  std::vector<int> players_of(GameSet subset) const;

  friend bool operator==(const CompleteSignedGraph& a, const CompleteSignedGraph& b) {
    return a.type_ == b.type_ && a.n_ == b.n_;
  }

 private:
  RootType type_;
  int n_;
  std::vector<Game> games_;
  std::vector<int> win_vectors_;
  std::vector<GameSet> incident_;
  std::vector<int> neg_, pos_, half_, loop_;
  GameSet all_ = 0;
};

using GraphPtr = std::shared_ptr<const CompleteSignedGraph>;

/// Canonical ordering: negative edges lex by (i,j) with i>j, then positive
/// edges in the same order, then half edges (B) or loops (C) by player.
GraphPtr build_complete_graph(RootType type, int n);

/// Half-unit vector of a won game on n players.
ScoreVector game_vector(const Game& game, int n);

class Tournament {
 public:
  Tournament(GraphPtr graph, GameSet bits);

  const CompleteSignedGraph& graph() const { return *graph_; }
  const GraphPtr& graph_ptr() const { return graph_; }
  GameSet bits() const { return bits_; }
  bool wins(int id) const { return contains(bits_, id); }

  friend bool operator==(const Tournament& a, const Tournament& b) {
    return *a.graph_ == *b.graph_ && a.bits_ == b.bits_;
  }

 private:
  GraphPtr graph_;
  GameSet bits_;
};

ScoreVector score(const Tournament& t);
ScoreVector standard_score(RootType type, int n);

/// T * X: flips exactly the games in `subset`.
Tournament reverse_subset(const Tournament& t, GameSet subset);

/// (|2 s_Phi|^2 - |2 s|^2) / 8, the regular degree of the interchange graph.
/// Throws InfeasibleScore when the result is negative or fractional.
long long degree_formula(RootType type, int n, const ScoreVector& score);

std::string to_bitstring(GameSet bits, int num_games);
GameSet parse_bitstring(std::string_view text, int num_games);

nlohmann::json to_json(const Tournament& t);
Tournament tournament_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ScoreVector& s);

}  // namespace coxeter
