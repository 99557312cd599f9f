#pragma once

// Fibers Tour(Phi, s), their interchange multigraphs, and the classification
// of interchange networks, extended networks and crystals.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "coxeter/generators.hpp"
#include "coxeter/signed_core.hpp"

namespace coxeter {

/// Largest n accepted by the exhaustive routines when no cap is given.
int default_cap(RootType type);

/// Tournaments with a fixed score, sorted by bit vector.
struct Fiber {
  GraphPtr graph;
  ScoreVector score;
  std::vector<GameSet> tournaments;

  RootType root_type() const { return graph->root_type(); }
  int n() const { return graph->n(); }
  int size() const { return static_cast<int>(tournaments.size()); }
  bool empty() const { return tournaments.empty(); }
  /// Position of `bits`, or -1.
  int index_of(GameSet bits) const;
};

/// Depth-first search over orientation bits; a branch is cut as soon as some
/// player's remaining games can no longer reach the target (range and parity).
/// `cap` <= 0 selects default_cap. An empty result means s is not a score.
Fiber enumerate_fiber(RootType type, int n, const ScoreVector& score, int cap = 0);

/// Every fiber of K_Phi on n players, ordered by score.
std::vector<Fiber> enumerate_all_fibers(RootType type, int n, int cap = 0);

/// The image of the score map over all 2^|E| tournaments, sorted.
std::vector<ScoreVector> enumerate_score_set(RootType type, int n, int cap = 0);

struct Neighbor {
  int vertex = 0;
  int multiplicity = 1;
  GameSet games = 0;  // the reversed generator
  int template_id = 0;
};

struct InterchangeEdge {
  int u = 0, v = 0;  // u < v
  int multiplicity = 1;
  GameSet games = 0;
  int template_id = 0;
};

class InterchangeGraph {
 public:
  explicit InterchangeGraph(Fiber fiber);

  const Fiber& fiber() const { return fiber_; }
  const CompleteSignedGraph& signed_graph() const { return *fiber_.graph; }
  int num_vertices() const { return fiber_.size(); }
  /// Sorted by neighbour index.
  const std::vector<Neighbor>& neighbors(int v) const { return adj_[v]; }
  /// Degree counting double edges twice.
  int degree(int v) const;
  /// 0 when u and v are not adjacent.
  int multiplicity(int u, int v) const;
  std::vector<InterchangeEdge> edges() const;

 private:
  Fiber fiber_;
  std::vector<std::vector<Neighbor>> adj_;
};

InterchangeGraph build_interchange_graph(Fiber fiber);

struct GraphMetrics {
  int num_vertices = 0;
  int num_edges = 0;  // distinct adjacent pairs
  bool connected = false;
  int diameter = 0;        // -1 when disconnected
  int regular_degree = 0;  // -1 when not regular
};

std::vector<int> bfs_distances(const InterchangeGraph& g, int source);
GraphMetrics graph_metrics(const InterchangeGraph& g);

nlohmann::json graph_to_json(const InterchangeGraph& g);
/// Double edges become two parallel edges.
std::string graph_to_dot(const InterchangeGraph& g);

enum class NetworkClass { SingleDiamond, DoubleDiamond, QuadrupleDiamond, SplitDiamond, HeavyDiamond, Unclassified };
enum class ProjectionClass { Disjoint, Square, Tent, Fork, Hanger, Other };

std::string_view to_string(NetworkClass c);
std::string_view to_string(ProjectionClass c);

/// Union of all length-two paths between two vertices at distance two.
struct Network {
  int u = 0, v = 0;
  std::vector<int> midpoints;
  /// (multiplicity u-m, multiplicity m-v) for each midpoint.
  std::vector<std::pair<int, int>> paths;
};

/// Throws InvalidInput unless u and v are at distance exactly two.
Network interchange_network(const InterchangeGraph& g, int u, int v);

/// Path multiplicities sorted, taken up to swapping the endpoints.
std::vector<std::pair<int, int>> network_signature(const Network& net);

/// Signature of the heavy diamond, read off the C_3 fibers.
const std::vector<std::pair<int, int>>& heavy_diamond_signature();

NetworkClass classify_signature(const std::vector<std::pair<int, int>>& signature);

/// Shape of the projection graph of a difference of two tournaments.
ProjectionClass projection_class(const CompleteSignedGraph& graph, GameSet difference);

struct NetworkClassification {
  NetworkClass network = NetworkClass::Unclassified;
  ProjectionClass projection = ProjectionClass::Other;
  int loops_in_difference = 0;
  /// The class is one the lemma table allows for this projection and type.
  bool consistent = false;
};

NetworkClassification classify_network(const InterchangeGraph& g, const Network& net);

/// Vertices and edges of an extended network, in fiber indices.
struct ExtendedNetwork {
  std::vector<int> vertices;         // sorted
  std::vector<InterchangeEdge> edges;  // sorted by (u, v)
  NetworkClass seed_class = NetworkClass::Unclassified;
  bool crystal = false;
};

/// Adds the networks of every pair at distance two inside the current vertex
/// set until nothing new appears. Throws CapExceeded past `vertex_cap`.
ExtendedNetwork extended_network(const InterchangeGraph& g, int u, int v, int vertex_cap = 64);

/// Every vertex meets the subgraph in two single edges and one double edge,
/// or in two double edges.
bool has_crystal_shape(const ExtendedNetwork& net);

struct CrystalStatistics {
  std::vector<ExtendedNetwork> crystals;
  /// Keyed by (u, v) with u < v; double edges only.
  std::map<std::pair<int, int>, int> double_edge_degree;
  /// Crystals containing each edge, keyed by (u, v) with u < v.
  std::map<std::pair<int, int>, std::vector<int>> crystals_of_edge;
  int gamma = 0;

  int crystal_degree(int u, int v) const;
  const std::vector<int>& crystals_containing(int u, int v) const;
};

struct NetworkCensus {
  long long pairs = 0;
  std::map<NetworkClass, long long> by_class;
  std::map<std::pair<ProjectionClass, NetworkClass>, long long> by_projection;
  long long unclassified = 0;
  long long inconsistent = 0;
};

/// Classifies the networks of the given distance-two pairs.
NetworkCensus network_census(const InterchangeGraph& g, const std::vector<std::pair<int, int>>& pairs);

/// All (u, v) with u < v at distance two.
std::vector<std::pair<int, int>> distance_two_pairs(const InterchangeGraph& g);

struct ExtendedNetworkReport {
  std::vector<ExtendedNetwork> networks;  // distinct
  CrystalStatistics crystals;
  long long stable_violations = 0;        // single/double/quadruple seed with N-hat != N
  long long crystal_shape_violations = 0; // split/heavy seed whose closure is not a crystal
  long long shared_edge_violations = 0;   // two extended networks sharing two or more edges
  long long crystal_single_edge_shares = 0;
  long long crystal_degree_violations = 0;  // above min{d, 2n}
  long long sharper_bound_violations = 0;   // above 2(n-2)
};

ExtendedNetworkReport extended_networks_and_crystals(const InterchangeGraph& g);

/// Only the crystals, for the coupling.
CrystalStatistics crystal_statistics(const InterchangeGraph& g);

std::string crystal_statistics_csv(const InterchangeGraph& g, const CrystalStatistics& stats);

/// Isomorphism of small multigraphs given as multiplicity matrices, by
/// backtracking over vertex bijections with degree pruning.
bool isomorphic(const std::vector<std::vector<int>>& a, const std::vector<std::vector<int>>& b);

std::vector<std::vector<int>> multiplicity_matrix(const InterchangeGraph& g);

/// Cartesian product of two multigraphs.
std::vector<std::vector<int>> cartesian_product(const std::vector<std::vector<int>>& a,
                                                const std::vector<std::vector<int>>& b);

}  // namespace coxeter
