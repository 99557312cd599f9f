#pragma once

// Z-frames: the bipartite player/match multigraph behind a sub-tournament,
// its decomposition into neutral trails, and the constructive reversal of a
// neutral sub-tournament by generator reversals.

#include <string>
#include <vector>

#include "coxeter/generators.hpp"
#include "coxeter/signed_core.hpp"

namespace coxeter {

/// Directed edge between a player and a match (the game id). Charge +1 means
/// the edge points away from the player.
struct ZEdge {
  int player = 0;
  int match = 0;
  int charge = 0;

  friend bool operator==(const ZEdge&, const ZEdge&) = default;
};

class ZFrame {
 public:
  ZFrame(int n, GameSet matches, std::vector<ZEdge> edges);

  int n() const { return n_; }
  GameSet matches() const { return matches_; }
  const std::vector<ZEdge>& edges() const { return edges_; }

  int net_charge(int player) const;
  int degree(int player) const;
  int match_degree(int match) const;
  bool is_neutral() const;
  bool empty() const { return edges_.empty(); }

 private:
  int n_;
  GameSet matches_;
  std::vector<ZEdge> edges_;
};

ZFrame build_zframe(const CompleteSignedGraph& graph, GameSet bits, GameSet subset);
ZFrame build_zframe(const Tournament& t, GameSet subset);

/// Consecutive edges alternately share a player and a match, starting with a
/// player: edges (0,1) meet at a player, (1,2) at a match, and so on. An open
/// trail starts and ends on degree-one matches; a closed trail's last edge
/// shares its match with the first.
struct Trail {
  std::vector<ZEdge> edges;
  bool closed = false;

  /// Number of matches.
  int length() const;
  GameSet matches() const;
  bool is_neutral() const;
};

struct TrailDecomposition {
  std::vector<Trail> trails;
};

/// Pairs opposite charges at each player (in game-id order) and chains the
/// pairs through shared matches. Throws InvalidInput naming the first
/// unbalanced player when the frame is not neutral.
TrailDecomposition decompose_neutral_trails(const ZFrame& frame);

/// Some neutral proper nonempty subset of the matches, or 0 if none exists.
/// Exhaustive over match subsets.
GameSet find_neutral_proper_subset(const CompleteSignedGraph& graph, GameSet bits, GameSet subset);

/// No proper nonempty set of matches is neutral. Player degrees outside
/// {0,2,4} and multi-trail decompositions are rejected before the
/// exhaustive search.
bool is_irreducible(const CompleteSignedGraph& graph, GameSet bits, GameSet subset);
bool is_irreducible(const Tournament& t, GameSet subset);

/// Generator reversals which, applied in order to `t`, flip exactly the games
/// of the neutral sub-tournament `subset` and restore everything else. Uses at
/// most l-2 reversals per irreducible component.
std::vector<GeneratorCopy> reverse_neutral_subtournament(const Tournament& t, GameSet subset);

/// Players as filled nodes, matches as hollow nodes.
std::string zframe_to_dot(const ZFrame& frame, const CompleteSignedGraph& graph);

}  // namespace coxeter
